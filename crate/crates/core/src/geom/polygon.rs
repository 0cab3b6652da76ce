use crate::geom::point::{orient2d, point_segment_dist, Point};
use crate::scalar::Scalar;

/// Location of a point relative to a closed polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonLocation {
    Inside,
    OnBoundary,
    Outside,
}

/// Signed area of a closed polygon (positive for counterclockwise).
pub fn signed_area<S: Scalar>(poly: &[Point<S>]) -> S {
    let n = poly.len();
    let mut twice = S::zero();
    for i in 0..n {
        let j = (i + 1) % n;
        twice += poly[i].cross(poly[j]);
    }
    twice * S::lit(0.5)
}

/// Point location by winding count; points within `tol` of any edge are
/// reported as on the boundary, which keeps the answer stable for robots
/// sitting exactly on cycle edges.
pub fn point_in_polygon<S: Scalar>(poly: &[Point<S>], p: Point<S>, tol: S) -> PolygonLocation {
    let n = poly.len();
    for i in 0..n {
        let j = (i + 1) % n;
        if point_segment_dist(p, poly[i], poly[j]) <= tol {
            return PolygonLocation::OnBoundary;
        }
    }
    // Crossing count on a ray toward +x.
    let mut inside = false;
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    if inside {
        PolygonLocation::Inside
    } else {
        PolygonLocation::Outside
    }
}

/// True when the counterclockwise polygon turns left (or runs straight)
/// at every vertex, within an absolute cross-product tolerance.
pub fn is_convex_ccw<S: Scalar>(poly: &[Point<S>], tol: S) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        if orient2d(a, b, c) < -tol {
            return false;
        }
    }
    true
}

/// Distance from an interior point of a convex counterclockwise polygon to
/// the polygon boundary: the minimum of the inward signed line distances.
/// Negative values mean the point lies outside.
pub fn convex_interior_clearance<S: Scalar>(poly: &[Point<S>], p: Point<S>) -> S {
    let n = poly.len();
    let mut best = S::infinity();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if len == S::zero() {
            continue;
        }
        // Left side of a->b is the interior for a counterclockwise polygon.
        let signed = e.cross(p - a) / len;
        best = best.min(signed);
    }
    best
}

/// Area of the intersection of two convex counterclockwise polygons
/// (Sutherland-Hodgman clipping).
pub fn convex_intersection_area<S: Scalar>(subject: &[Point<S>], clip: &[Point<S>]) -> S {
    let mut output: Vec<Point<S>> = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if output.is_empty() {
            return S::zero();
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        let input = core::mem::take(&mut output);
        let m = input.len();
        for k in 0..m {
            let cur = input[k];
            let next = input[(k + 1) % m];
            let cur_in = orient2d(a, b, cur) >= S::zero();
            let next_in = orient2d(a, b, next) >= S::zero();
            if cur_in {
                output.push(cur);
            }
            if cur_in != next_in {
                let da = orient2d(a, b, cur);
                let db = orient2d(a, b, next);
                let t = da / (da - db);
                output.push(cur.lerp(next, t));
            }
        }
    }
    signed_area(&output).abs()
}
