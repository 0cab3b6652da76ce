use crate::geom::point::{orient2d, point_segment_dist, project_param, Point};
use crate::scalar::Scalar;

/// Indices of the convex hull vertices in counterclockwise order, starting
/// from the lexicographically smallest point (x, then y). Exactly collinear
/// interior points of hull edges are excluded; points within floating-point
/// noise of an edge may survive as extra vertices. `tol` only merges
/// coincident points, keeping the smallest index per location. Fewer than
/// three hull points are returned for degenerate inputs.
pub fn convex_hull<S: Scalar>(points: &[Point<S>], tol: S) -> Vec<usize> {
    monotone_chain(points, tol)
}

/// Indices of every point lying on the convex hull border (vertices plus
/// collinear on-edge points), counterclockwise, sorted along each edge.
pub fn hull_border<S: Scalar>(points: &[Point<S>], tol: S) -> Vec<usize> {
    let vertices = monotone_chain(points, tol);
    if vertices.len() < 2 {
        return collinear_chain(points, tol);
    }
    if vertices.len() == 2 {
        return collinear_chain(points, tol);
    }
    let mut border = Vec::new();
    let h = vertices.len();
    for i in 0..h {
        let a = points[vertices[i]];
        let b = points[vertices[(i + 1) % h]];
        border.push(vertices[i]);
        // Collect points strictly between a and b on this edge.
        let mut on_edge: Vec<(S, usize)> = Vec::new();
        for (idx, &p) in points.iter().enumerate() {
            if vertices.contains(&idx) {
                continue;
            }
            if point_segment_dist(p, a, b) <= tol {
                let t = project_param(p, a, b);
                if t > S::zero() && t < S::one() {
                    on_edge.push((t, idx));
                }
            }
        }
        on_edge.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
        border.extend(on_edge.into_iter().map(|(_, idx)| idx));
    }
    // A point hugging a hull corner can register on both adjacent edges.
    let mut seen = vec![false; points.len()];
    border.retain(|&idx| {
        let fresh = !seen[idx];
        seen[idx] = true;
        fresh
    });
    border
}

/// True when `points[index]` lies on the convex hull border of `points`.
pub fn on_hull_border<S: Scalar>(points: &[Point<S>], index: usize, tol: S) -> bool {
    let vertices = monotone_chain(points, tol);
    match vertices.len() {
        0 => false,
        1 => points[index].dist(points[vertices[0]]) <= tol,
        2 => point_segment_dist(points[index], points[vertices[0]], points[vertices[1]]) <= tol,
        h => {
            let p = points[index];
            for i in 0..h {
                let a = points[vertices[i]];
                let b = points[vertices[(i + 1) % h]];
                if point_segment_dist(p, a, b) <= tol {
                    return true;
                }
            }
            false
        }
    }
}

fn monotone_chain<S: Scalar>(points: &[Point<S>], tol: S) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        points[i]
            .x
            .partial_cmp(&points[j].x)
            .unwrap()
            .then(points[i].y.partial_cmp(&points[j].y).unwrap())
            .then(i.cmp(&j))
    });
    // Drop coincident duplicates, keeping the smallest index per location.
    let mut dedup: Vec<usize> = Vec::with_capacity(n);
    for &idx in &order {
        if let Some(&last) = dedup.last() {
            if points[last].dist(points[idx]) <= tol {
                continue;
            }
        }
        dedup.push(idx);
    }
    if dedup.len() == 1 {
        return dedup;
    }
    if dedup.len() == 2 {
        return dedup;
    }
    // Pops must use exact orientation signs. The sort above cannot see any
    // tolerance, so a cluster of points whose coordinates differ by less
    // than one part in 1e9 is visited in jitter order, not geometric order;
    // treating noise-scale triples as collinear then discards true extreme
    // points mid-cluster. Exact signs keep every extreme point and still
    // drop exactly collinear edge interiors.
    let turn_ok = |a: usize, b: usize, c: usize| -> bool {
        orient2d(points[a], points[b], points[c]) > S::zero()
    };
    let mut lower: Vec<usize> = Vec::new();
    for &idx in &dedup {
        while lower.len() >= 2 && !turn_ok(lower[lower.len() - 2], lower[lower.len() - 1], idx) {
            lower.pop();
        }
        lower.push(idx);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &idx in dedup.iter().rev() {
        while upper.len() >= 2 && !turn_ok(upper[upper.len() - 2], upper[upper.len() - 1], idx) {
            upper.pop();
        }
        upper.push(idx);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // Fully collinear inputs collapse to the two extremes.
    if lower.len() < 3 {
        return vec![dedup[0], *dedup.last().unwrap()];
    }
    lower
}

/// All indices ordered along the carrier line, for inputs whose hull is a
/// segment or a single point.
fn collinear_chain<S: Scalar>(points: &[Point<S>], tol: S) -> Vec<usize> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        points[i]
            .x
            .partial_cmp(&points[j].x)
            .unwrap()
            .then(points[i].y.partial_cmp(&points[j].y).unwrap())
            .then(i.cmp(&j))
    });
    let mut dedup: Vec<usize> = Vec::new();
    for idx in order {
        if let Some(&last) = dedup.last() {
            if points[last].dist(points[idx]) <= tol {
                continue;
            }
        }
        dedup.push(idx);
    }
    dedup
}
