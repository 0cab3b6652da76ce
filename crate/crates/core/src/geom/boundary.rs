use crate::geom::config::Configuration;
use crate::geom::disc::{disc_graph, DiscGraph};
use crate::geom::hull::hull_border;
use crate::geom::point::Point;
use crate::geom::polygon::{is_convex_ccw, signed_area};
use crate::geom::GeometryError;
use crate::scalar::Scalar;
use std::collections::HashSet;

/// The outer face of the unit disc graph: robots visited counterclockwise.
/// `indices` may repeat on degenerate (zero-area or pinched) cycles, which
/// are flagged; consecutive positions are always within unit distance.
#[derive(Clone, Debug)]
pub struct BoundaryCycle<S> {
    pub indices: Vec<usize>,
    pub positions: Vec<Point<S>>,
    pub degenerate: bool,
}

impl<S: Scalar> BoundaryCycle<S> {
    #[inline]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn signed_area(&self) -> S {
        signed_area(&self.positions)
    }

    /// Robot ids on the cycle, deduplicated, ascending.
    pub fn member_set(&self) -> Vec<usize> {
        let mut ids = self.indices.clone();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Walks the outer face of the unit disc graph.
///
/// Start: lexicographically smallest robot by (y, then x), virtually entered
/// heading in -x. Step: among the current robot's disc-graph neighbors pick
/// the smallest counterclockwise turn measured from the reversed incoming
/// direction (a turn of zero ranks as a full turn, so walking straight back
/// is the last resort); equal angles prefer the shorter edge so collinear
/// on-edge robots stay on the cycle. Stops when the first directed edge
/// would repeat.
///
/// Robots within `tol` of each other are geometrically indistinguishable
/// at the walk's own resolution (edges between them have no usable
/// direction), so each such cluster enters the walk as a single robot: the
/// member farthest from the swarm centroid, which is the one an exact walk
/// would keep on the hull. The rest of the cluster never appears in
/// `indices`.
pub fn connectivity_boundary<S: Scalar>(
    config: &Configuration<S>,
    tol: S,
) -> Result<BoundaryCycle<S>, GeometryError> {
    let graph = disc_graph(config, S::one(), tol);
    if !graph.is_connected() {
        return Err(GeometryError::Disconnected);
    }
    let Some(reps) = coalesce_indistinct(config, tol) else {
        return walk_outer_face(config, &graph, tol);
    };
    let rep_pts: Vec<Point<S>> = reps.iter().map(|&i| config[i]).collect();
    let reduced = Configuration::new(rep_pts)?;
    let reduced_graph = disc_graph(&reduced, S::one(), tol);
    if !reduced_graph.is_connected() {
        // Collapsing sub-tolerance clusters cannot open a gap wider than
        // the clusters themselves; if it still does, keep the old behavior.
        return walk_outer_face(config, &graph, tol);
    }
    let cycle = walk_outer_face(&reduced, &reduced_graph, tol)?;
    Ok(BoundaryCycle {
        indices: cycle.indices.iter().map(|&k| reps[k]).collect(),
        positions: cycle.positions,
        degenerate: cycle.degenerate,
    })
}

/// Clusters robots whose gaps are within `tol` (transitively) and picks one
/// representative per cluster: the member farthest from the swarm centroid,
/// ties to the lowest index. Returns `None` when every robot stands alone.
fn coalesce_indistinct<S: Scalar>(config: &Configuration<S>, tol: S) -> Option<Vec<usize>> {
    let pts = config.positions();
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut merged = false;
    for i in 0..n {
        for j in (i + 1)..n {
            if pts[i].dist(pts[j]) <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                    merged = true;
                }
            }
        }
    }
    if !merged {
        return None;
    }
    let centroid = config.centroid();
    let mut best: Vec<Option<(S, usize)>> = vec![None; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        let d = (pts[i] - centroid).norm_sq();
        let outranks = match best[root] {
            None => true,
            Some((bd, _)) => d > bd,
        };
        if outranks {
            best[root] = Some((d, i));
        }
    }
    let mut reps: Vec<usize> = best.into_iter().flatten().map(|(_, i)| i).collect();
    reps.sort_unstable();
    Some(reps)
}

fn walk_outer_face<S: Scalar>(
    config: &Configuration<S>,
    graph: &DiscGraph<S>,
    tol: S,
) -> Result<BoundaryCycle<S>, GeometryError> {
    let pts = config.positions();
    let n = pts.len();
    if n == 1 {
        return Ok(BoundaryCycle {
            indices: vec![0],
            positions: vec![pts[0]],
            degenerate: true,
        });
    }
    let start = (0..n)
        .min_by(|&i, &j| {
            pts[i]
                .y
                .partial_cmp(&pts[j].y)
                .unwrap()
                .then(pts[i].x.partial_cmp(&pts[j].x).unwrap())
                .then(i.cmp(&j))
        })
        .unwrap();
    if graph.neighbors(start).is_empty() {
        // Connectivity was checked, so this only happens for n == 1.
        return Err(GeometryError::Disconnected);
    }

    let virtual_back = Point::new(S::one(), S::zero());
    let first = next_on_face(pts, graph, start, virtual_back, true, tol);
    let mut indices = vec![start];
    let (mut from, mut at) = (start, first);
    // A face traversal visits each directed edge at most once, so revisiting
    // one without having closed through the start edge means the angular
    // rule was inconsistent: rim robots collinear to within floating-point
    // noise plus crossing visibility chords can trap it in a sliver pocket.
    // Such a rim is convex to within the same noise, so its hull border is
    // the correct boundary.
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    seen.insert((start, first));
    let step_cap = 4 * graph.edge_count() + 4;
    let mut steps = 0;
    loop {
        indices.push(at);
        let back = pts[from] - pts[at];
        let next = next_on_face(pts, graph, at, back, false, tol);
        from = at;
        at = next;
        if from == start && at == first {
            indices.pop(); // drop the closing repeat of the start robot
            break;
        }
        if !seen.insert((from, at)) {
            return hull_fallback(pts, tol);
        }
        steps += 1;
        if steps > step_cap {
            return Err(GeometryError::BoundaryWalkDiverged);
        }
    }

    let positions: Vec<Point<S>> = indices.iter().map(|&i| pts[i]).collect();
    let mut sorted = indices.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let repeats = sorted.len() != indices.len();
    let area = signed_area(&positions);
    let degenerate = indices.len() < 3 || repeats || area.abs() <= tol;
    Ok(BoundaryCycle {
        indices,
        positions,
        degenerate,
    })
}

/// Boundary cycle from the convex hull border, for rims where the angular
/// walk has no consistent face. Consecutive hull-border robots must still
/// be within viewing range or the cycle is rejected outright.
fn hull_fallback<S: Scalar>(
    pts: &[Point<S>],
    tol: S,
) -> Result<BoundaryCycle<S>, GeometryError> {
    let indices = hull_border(pts, tol);
    let positions: Vec<Point<S>> = indices.iter().map(|&i| pts[i]).collect();
    let m = positions.len();
    for k in 0..m {
        if positions[k].dist(positions[(k + 1) % m]) > S::one() + tol {
            return Err(GeometryError::BoundaryWalkDiverged);
        }
    }
    let degenerate = m < 3 || signed_area(&positions).abs() <= tol;
    Ok(BoundaryCycle {
        indices,
        positions,
        degenerate,
    })
}

/// Picks the next robot along the outer face. `back` points from the current
/// robot toward where the walk came from; at the start robot there is no
/// incoming edge, so a zero turn is allowed there (`allow_zero_turn`).
fn next_on_face<S: Scalar>(
    pts: &[Point<S>],
    graph: &DiscGraph<S>,
    current: usize,
    back: Point<S>,
    allow_zero_turn: bool,
    _tol: S,
) -> usize {
    let tau = S::TAU();
    let angle_tol = S::lit(1e-9);
    let mut best: Option<(S, S, usize)> = None; // (turn, edge length, index)
    for &cand in graph.neighbors(current) {
        let dir = pts[cand] - pts[current];
        let mut turn = back.cross(dir).atan2(back.dot(dir));
        if turn < S::zero() {
            turn += tau;
        }
        if !allow_zero_turn && turn <= angle_tol {
            turn += tau;
        }
        let len = dir.norm();
        let better = match &best {
            None => true,
            Some((bt, bl, bi)) => {
                if (turn - *bt).abs() <= angle_tol {
                    // Same ray: prefer the shorter edge so collinear robots
                    // between the endpoints are visited rather than skipped.
                    len < *bl - angle_tol || ((len - *bl).abs() <= angle_tol && cand < *bi)
                } else {
                    turn < *bt
                }
            }
        };
        if better {
            best = Some((turn, len, cand));
        }
    }
    best.expect("connected graph: every robot has a neighbor").2
}

/// True when the cycle is convex: counterclockwise with no right turns
/// (collinear runs allowed). Degenerate cycles are never convex.
pub fn is_convex_cycle<S: Scalar>(cycle: &BoundaryCycle<S>, tol: S) -> bool {
    if cycle.degenerate || cycle.len() < 3 {
        return false;
    }
    is_convex_ccw(&cycle.positions, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polygon::{point_in_polygon, PolygonLocation};
    use crate::scalar::default_geom_tol;

    fn boundary(pairs: &[(f64, f64)]) -> BoundaryCycle<f64> {
        let c = Configuration::from_pairs(pairs).unwrap();
        connectivity_boundary(&c, default_geom_tol()).unwrap()
    }

    #[test]
    fn grid_3x3_outer_ring() {
        let mut pts = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                pts.push((x as f64, y as f64));
            }
        }
        let cycle = boundary(&pts);
        assert!(!cycle.degenerate);
        assert_eq!(cycle.indices, vec![0, 1, 2, 5, 8, 7, 6, 3]);
        assert!(cycle.signed_area() > 0.0);
        assert!(is_convex_cycle(&cycle, 1e-9));
    }

    #[test]
    fn collinear_line_walks_out_and_back() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64 * 0.5, 0.0)).collect();
        let cycle = boundary(&pts);
        assert!(cycle.degenerate);
        assert_eq!(cycle.indices, vec![0, 1, 2, 3, 4, 3, 2, 1]);
        for w in 0..cycle.len() {
            let a = cycle.positions[w];
            let b = cycle.positions[(w + 1) % cycle.len()];
            assert!(a.dist(b) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn two_robots_degenerate() {
        let cycle = boundary(&[(0.0, 0.0), (0.8, 0.0)]);
        assert!(cycle.degenerate);
        assert_eq!(cycle.member_set(), vec![0, 1]);
    }

    #[test]
    fn single_robot_degenerate() {
        let cycle = boundary(&[(2.0, 3.0)]);
        assert!(cycle.degenerate);
        assert_eq!(cycle.indices, vec![0]);
    }

    #[test]
    fn disconnected_is_an_error() {
        let c = Configuration::from_pairs(&[(0.0, 0.0), (5.0, 0.0)]).unwrap();
        assert!(matches!(
            connectivity_boundary(&c, default_geom_tol()),
            Err(GeometryError::Disconnected)
        ));
    }

    #[test]
    fn collinear_midpoints_stay_on_cycle() {
        // Square of side 1.6 with midpoint robots on each edge: all eight
        // robots are on the boundary and the cycle is convex.
        let pts = vec![
            (0.0, 0.0),
            (0.8, 0.0),
            (1.6, 0.0),
            (1.6, 0.8),
            (1.6, 1.6),
            (0.8, 1.6),
            (0.0, 1.6),
            (0.0, 0.8),
        ];
        let cycle = boundary(&pts);
        assert!(!cycle.degenerate);
        assert_eq!(cycle.member_set(), vec![0, 1, 2, 3, 4, 5, 6, 7]);
        assert!(is_convex_cycle(&cycle, 1e-9));
    }

    #[test]
    fn dented_cycle_is_not_convex() {
        let pts = vec![
            (0.0, 0.0),
            (0.8, 0.3), // midpoint pushed inward
            (1.6, 0.0),
            (1.6, 0.8),
            (1.6, 1.6),
            (0.8, 1.6),
            (0.0, 1.6),
            (0.0, 0.8),
        ];
        let cycle = boundary(&pts);
        assert!(!is_convex_cycle(&cycle, 1e-9));
    }

    #[test]
    fn sub_tolerance_pileup_keeps_the_outward_robot() {
        // A 12-gon ring with a stack of stragglers chained behind one
        // corner at gaps of 2e-9 down to 2.5e-10: the whole stack is one
        // cluster at the walk's resolution and only the corner, being
        // farthest out, may represent it.
        let m = 12;
        let mut pts: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                (1.5 * a.cos(), 1.5 * a.sin())
            })
            .collect();
        for k in 0..4 {
            let depth = 2e-9 / (1u32 << k) as f64;
            pts.push((1.5 - depth, 0.0));
        }
        let cycle = boundary(&pts);
        assert!(!cycle.degenerate);
        assert_eq!(cycle.member_set(), (0..m).collect::<Vec<_>>());
        assert!(is_convex_cycle(&cycle, 1e-9));
    }

    #[test]
    fn bit_identical_twins_resolve_to_the_lower_index() {
        let pts = vec![
            (0.0, 0.0),
            (0.9, 0.0),
            (0.9, 0.9),
            (0.0, 0.9),
            (0.9, 0.0), // exact duplicate of robot 1
        ];
        let cycle = boundary(&pts);
        assert!(!cycle.degenerate);
        assert_eq!(cycle.member_set(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn all_robots_inside_or_on_cycle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut built = 0;
        while built < 15 {
            // Random blob kept connected by sampling from a disc of radius 2.
            let n = rng.gen_range(5..40);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let r = rng.gen_range(0.0..2.0_f64);
                    let a = rng.gen_range(0.0..std::f64::consts::TAU);
                    (r * a.cos(), r * a.sin())
                })
                .collect();
            let c = Configuration::from_pairs(&pts).unwrap();
            let cycle = match connectivity_boundary(&c, default_geom_tol()) {
                Ok(cy) => cy,
                Err(_) => continue, // disconnected sample
            };
            built += 1;
            if cycle.degenerate {
                continue;
            }
            for p in c.positions() {
                assert_ne!(
                    point_in_polygon(&cycle.positions, *p, 1e-9),
                    PolygonLocation::Outside,
                    "robot escaped its own boundary cycle"
                );
            }
            for w in 0..cycle.len() {
                let a = cycle.positions[w];
                let b = cycle.positions[(w + 1) % cycle.len()];
                assert!(a.dist(b) <= 1.0 + 1e-9);
            }
        }
    }
}
