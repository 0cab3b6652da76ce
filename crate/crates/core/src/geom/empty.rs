//! Largest circle empty of robots inside the region bounded by the
//! connectivity boundary, and the derived hole predicate.

use crate::geom::boundary::BoundaryCycle;
use crate::geom::config::Configuration;
use crate::geom::enclose::Circle;
use crate::geom::grid::CellGrid;
use crate::geom::point::{point_segment_dist, segment_segment_dist, Point};
use crate::geom::polygon::{point_in_polygon, signed_area, PolygonLocation};
use crate::geom::{connectivity_boundary, GeometryError};
use crate::scalar::Scalar;

/// An inner-maximal circle is pinned by at least three constraints, each a
/// robot or a boundary edge. Enumerating every constraint pattern (robots
/// and edge lines in all mixes of three, plus diametral pairs and polygon
/// vertices) yields a finite candidate set that contains the optimum; each
/// candidate is then scored exactly against all robots and edge segments.
/// A coarse interior scan gives a lower bound first so that enumeration can
/// be pruned to constraints near each other (the radius function is
/// 1-Lipschitz, so the scan bound plus half a lattice diagonal caps the
/// optimum).
pub fn largest_empty_circle<S: Scalar>(
    config: &Configuration<S>,
    cycle: &BoundaryCycle<S>,
) -> Result<Circle<S>, GeometryError> {
    let poly = &cycle.positions;
    if poly.len() < 3 || signed_area(poly).abs() <= S::lit(1e-12) {
        // Zero-area region: every interior circle is a point.
        return Ok(Circle {
            center: poly[0],
            radius: S::zero(),
        });
    }
    let robots = config.positions();

    let mut min = poly[0];
    let mut max = poly[0];
    for p in poly {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    let extent = (max.x - min.x).max(max.y - min.y);
    let h = extent / S::lit(24.0);

    let edges: Vec<(Point<S>, Point<S>)> = (0..poly.len())
        .map(|k| (poly[k], poly[(k + 1) % poly.len()]))
        .filter(|(a, b)| a.dist_sq(*b) > S::lit(1e-24))
        .collect();

    let grid = CellGrid::build(robots, h.max(S::lit(1e-9)));
    let eval_cap = extent * S::lit(4.0) + S::one();

    let radius_at = |c: Point<S>| -> S {
        if point_in_polygon(poly, c, S::lit(1e-12)) != PolygonLocation::Inside {
            return S::zero();
        }
        let mut r = grid.min_dist_capped(c, eval_cap);
        for &(a, b) in &edges {
            r = r.min(point_segment_dist(c, a, b));
        }
        r.max(S::zero())
    };

    // Coarse scan: lower bound plus a deterministic fallback center.
    let mut best_r = S::zero();
    let mut best_c = poly[0];
    let steps = 24usize;
    for iy in 0..=steps {
        for ix in 0..=steps {
            let c = Point::new(
                min.x + (max.x - min.x) * S::of_usize(ix) / S::of_usize(steps),
                min.y + (max.y - min.y) * S::of_usize(iy) / S::of_usize(steps),
            );
            let r = radius_at(c);
            if r > best_r {
                best_r = r;
                best_c = c;
            }
        }
    }
    // Any interior point is within h/sqrt(2) of a lattice point, and the
    // radius function is 1-Lipschitz, so the optimum is below this cap.
    let r_cap = best_r + h * S::lit(0.75);
    let reach = r_cap * S::lit(2.0);

    let margin = r_cap + S::lit(1e-9);
    let consider = |c: Point<S>, best_r: &mut S, best_c: &mut Point<S>| {
        if !c.is_finite()
            || c.x < min.x - margin
            || c.x > max.x + margin
            || c.y < min.y - margin
            || c.y > max.y + margin
        {
            return;
        }
        // Cheap rejection passes before the exact interior test.
        let mut r = S::infinity();
        for &(a, b) in &edges {
            r = r.min(point_segment_dist(c, a, b));
            if r <= *best_r {
                return;
            }
        }
        r = r.min(grid.min_dist_capped(c, r));
        if r <= *best_r {
            return;
        }
        if point_in_polygon(poly, c, S::lit(1e-12)) != PolygonLocation::Inside {
            return;
        }
        *best_r = r;
        *best_c = c;
    };

    // Inward unit normal and offset for each edge line (interior is to the
    // left of a counter-clockwise cycle).
    let lines: Vec<(Point<S>, S)> = edges
        .iter()
        .map(|&(a, b)| {
            let d = b - a;
            let n = Point::new(-d.y, d.x) / d.norm();
            (n, n.dot(a))
        })
        .collect();

    // Robot-near-edge and edge-near-edge incidence under the pruning reach.
    let near_robots: Vec<Vec<usize>> = edges
        .iter()
        .map(|&(a, b)| {
            (0..robots.len())
                .filter(|&i| point_segment_dist(robots[i], a, b) <= reach)
                .collect()
        })
        .collect();
    let edge_near = |e: usize, f: usize| -> bool {
        segment_segment_dist(edges[e].0, edges[e].1, edges[f].0, edges[f].1) <= reach
    };

    // Vertex candidates (degenerate but cheap; the spec of the search is
    // max over closed region, whose boundary corners score zero anyway).
    for &v in poly.iter() {
        consider(v, &mut best_r, &mut best_c);
    }

    // Robot pair and triple candidates.
    for i in 0..robots.len() {
        let near = grid.within(robots[i], reach);
        for (ai, &j) in near.iter().enumerate() {
            if j <= i {
                continue;
            }
            consider(robots[i].lerp(robots[j], S::lit(0.5)), &mut best_r, &mut best_c);
            for &k in near.iter().skip(ai + 1) {
                if k <= j || robots[j].dist(robots[k]) > reach {
                    continue;
                }
                if let Some(cc) =
                    crate::geom::point::circumcenter(robots[i], robots[j], robots[k], S::lit(1e-12))
                {
                    consider(cc, &mut best_r, &mut best_c);
                }
            }
        }
    }

    // Robot-edge candidates: the contact points are antipodal, so the center
    // is the midpoint of the robot and its foot on the edge line.
    for (e, &(n, d)) in lines.iter().enumerate() {
        for &i in &near_robots[e] {
            let s = n.dot(robots[i]) - d;
            let c = robots[i] - n * (s * S::lit(0.5));
            consider(c, &mut best_r, &mut best_c);
        }
    }

    // Robot-robot-edge: center on the pair bisector, distance to the edge
    // line equal to the common robot distance.
    for (e, &(n, d)) in lines.iter().enumerate() {
        let nr = &near_robots[e];
        for (ai, &i) in nr.iter().enumerate() {
            for &j in nr.iter().skip(ai + 1) {
                if robots[i].dist(robots[j]) > reach {
                    continue;
                }
                let u1 = robots[i] - robots[j];
                let v1 = (robots[i].norm_sq() - robots[j].norm_sq()) * S::lit(0.5);
                for c in two_constraint_roots((u1, v1, S::zero()), (n, d, S::one()), robots[i]) {
                    consider(c, &mut best_r, &mut best_c);
                }
            }
        }
    }

    // Robot-edge-edge: center equidistant (inward) from two edge lines and
    // one robot.
    for e in 0..edges.len() {
        for f in (e + 1)..edges.len() {
            if !edge_near(e, f) {
                continue;
            }
            let (n1, d1) = lines[e];
            let (n2, d2) = lines[f];
            let mut fi = 0;
            let (le, lf) = (&near_robots[e], &near_robots[f]);
            for &i in le {
                while fi < lf.len() && lf[fi] < i {
                    fi += 1;
                }
                if fi >= lf.len() {
                    break;
                }
                if lf[fi] != i {
                    continue;
                }
                for c in two_constraint_roots((n1, d1, S::one()), (n2, d2, S::one()), robots[i]) {
                    consider(c, &mut best_r, &mut best_c);
                }
            }
        }
    }

    // Edge-edge-edge: solve the linear system of three equal inward line
    // distances.
    for e in 0..edges.len() {
        for f in (e + 1)..edges.len() {
            if !edge_near(e, f) {
                continue;
            }
            for g in (f + 1)..edges.len() {
                if !edge_near(e, g) || !edge_near(f, g) {
                    continue;
                }
                if let Some(c) = three_line_center(lines[e], lines[f], lines[g]) {
                    consider(c, &mut best_r, &mut best_c);
                }
            }
        }
    }

    Ok(Circle {
        center: best_c,
        radius: best_r,
    })
}

/// Roots of the system `u1.p = v1 + w1*r`, `u2.p = v2 + w2*r`,
/// `|p - z| = r`: solving the linear part gives `p(r)` affine in `r`, and
/// substitution yields a quadratic. Returns the centers for nonnegative
/// real roots.
fn two_constraint_roots<S: Scalar>(
    c1: (Point<S>, S, S),
    c2: (Point<S>, S, S),
    z: Point<S>,
) -> Vec<Point<S>> {
    let (u1, v1, w1) = c1;
    let (u2, v2, w2) = c2;
    let det = u1.cross(u2);
    let scale = u1.norm() * u2.norm();
    if det.abs() <= scale * S::lit(1e-12) {
        return Vec::new();
    }
    // p(r) = p0 + pd * r by Cramer's rule.
    let p0 = Point::new(v1 * u2.y - v2 * u1.y, u1.x * v2 - u2.x * v1) / det;
    let pd = Point::new(w1 * u2.y - w2 * u1.y, u1.x * w2 - u2.x * w1) / det;
    let q = p0 - z;
    let a = pd.norm_sq() - S::one();
    let b = pd.dot(q) * S::lit(2.0);
    let c = q.norm_sq();
    let mut roots = Vec::new();
    if a.abs() <= S::lit(1e-14) {
        if b.abs() > S::lit(1e-14) {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - a * c * S::lit(4.0);
        if disc >= S::zero() {
            let sq = disc.sqrt();
            let qf = -(b + S::lit(b.to_f64().unwrap_or(0.0).signum()) * sq) * S::lit(0.5);
            if qf.abs() > S::zero() {
                roots.push(qf / a);
                roots.push(c / qf);
            } else {
                roots.push(S::zero());
            }
        }
    }
    roots
        .into_iter()
        .filter(|r| *r >= S::zero())
        .map(|r| p0 + pd * r)
        .collect()
}

/// Center with equal inward distance to three edge lines, if the 2x2
/// difference system is well conditioned.
fn three_line_center<S: Scalar>(
    l1: (Point<S>, S),
    l2: (Point<S>, S),
    l3: (Point<S>, S),
) -> Option<Point<S>> {
    // (n1 - n2).p = d1 - d2 ; (n1 - n3).p = d1 - d3
    let a = l1.0 - l2.0;
    let b = l1.0 - l3.0;
    let det = a.cross(b);
    if det.abs() <= S::lit(1e-12) {
        return None;
    }
    let r1 = l1.1 - l2.1;
    let r2 = l1.1 - l3.1;
    Some(Point::new(r1 * b.y - r2 * a.y, a.x * r2 - b.x * r1) / det)
}

/// Whether the region bounded by the connectivity boundary contains an
/// empty circle of diameter at least `delta`.
pub fn has_delta_hole<S: Scalar>(
    config: &Configuration<S>,
    delta: S,
) -> Result<bool, GeometryError> {
    let cycle = connectivity_boundary(config, S::lit(1e-9))?;
    let circle = largest_empty_circle(config, &cycle)?;
    Ok(circle.diameter() >= delta)
}
