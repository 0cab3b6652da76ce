//! The contracting-wave protocol.
//!
//! Each round the convex boundary cycle moves by one application of
//! boundary averaging (every boundary robot toward the midpoint of its two
//! cycle neighbors), and the averaging is applied twice more virtually to
//! lay out two tiers of wave segments behind the boundary. Non-boundary
//! robots caught between the tiers ride the wave: their segment
//! coordinates are remapped so the two tiers merge into the single tier
//! behind the new boundary, compressing depth by half per round. Robots
//! strictly inside the innermost tier do not move.
//!
//! Every round is exactly invertible from its outcome, which is the
//! mechanism behind symmetry preservation: [`invert_round`] reconstructs
//! the previous configuration from the next one alone.

pub mod local;
pub mod segment;

use crate::geom::{
    connectivity_boundary, is_convex_cycle, point_in_polygon, BoundaryCycle, Configuration,
    GeometryError, Point, PolygonLocation,
};
use crate::linalg::{solve_circulant_tridiagonal, LinalgError};
use crate::scalar::Scalar;
use segment::{SegCoord, WaveSegment};

#[derive(Debug, thiserror::Error)]
pub enum WaveError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("wave step size must lie in (0, 0.5), got {eps}")]
    InvalidEpsilon { eps: f64 },
    #[error("connectivity boundary is degenerate (zero area)")]
    DegenerateBoundary,
    #[error("connectivity boundary is not convex")]
    NonConvexBoundary,
    #[error("region has an empty circle of diameter {diameter}, at or above the limit {limit}")]
    RegionHasHole { diameter: f64, limit: f64 },
    #[error("robot {index} lies in no wave region")]
    RobotOutsideRegions { index: usize },
    #[error("robot {index} has no pre-image under the wave step")]
    NotInImage { index: usize },
    #[error("reconstructed boundary is not a valid pre-image: {reason}")]
    InvalidPreimageBoundary { reason: &'static str },
}

#[derive(Debug, Clone, Copy)]
pub struct WaveParams<S> {
    pub epsilon: S,
    pub viewing_range: S,
    /// Empty-circle diameter at which the region check fails; `None`
    /// disables the check.
    pub hole_check_delta: Option<S>,
}

impl<S: Scalar> WaveParams<S> {
    pub fn new(epsilon: S) -> Result<Self, WaveError> {
        if !epsilon.is_finite() || epsilon <= S::zero() || epsilon >= S::lit(0.5) {
            return Err(WaveError::InvalidEpsilon {
                eps: epsilon.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(WaveParams {
            epsilon,
            viewing_range: S::lit(2.0) + S::SQRT_2(),
            hole_check_delta: Some(S::one()),
        })
    }

    pub fn with_viewing_range(mut self, range: S) -> Self {
        self.viewing_range = range;
        self
    }

    pub fn with_hole_check(mut self, delta: Option<S>) -> Self {
        self.hole_check_delta = delta;
        self
    }
}

/// The averaging move of a single vertex: `epsilon` of the way toward the
/// midpoint of its two cycle neighbors. Shared by the global tier
/// construction and the per-robot local views so both produce bitwise
/// identical positions.
#[inline]
pub(crate) fn averaged_vertex<S: Scalar>(
    prev: Point<S>,
    cur: Point<S>,
    next: Point<S>,
    epsilon: S,
) -> Point<S> {
    let mid = prev.lerp(next, S::lit(0.5));
    cur + (mid - cur) * epsilon
}

/// One application of boundary averaging to a closed cycle of positions:
/// each vertex moves `epsilon` toward the midpoint of its cyclic neighbors.
pub fn boundary_average<S: Scalar>(cycle: &[Point<S>], epsilon: S) -> Vec<Point<S>> {
    let m = cycle.len();
    (0..m)
        .map(|k| averaged_vertex(cycle[(k + m - 1) % m], cycle[k], cycle[(k + 1) % m], epsilon))
        .collect()
}

/// Exact inverse of [`boundary_average`]: solves the circulant system
/// `(1 - eps) x_k + (eps/2)(x_{k-1} + x_{k+1}) = y_k` coordinatewise.
/// Strictly diagonally dominant for `eps < 0.5`, so always solvable.
pub fn boundary_average_invert<S: Scalar>(
    cycle: &[Point<S>],
    epsilon: S,
) -> Result<Vec<Point<S>>, WaveError> {
    let diag = S::one() - epsilon;
    let off = epsilon * S::lit(0.5);
    let xs: Vec<S> = cycle.iter().map(|p| p.x).collect();
    let ys: Vec<S> = cycle.iter().map(|p| p.y).collect();
    let sx = solve_circulant_tridiagonal(off, diag, &xs)?;
    let sy = solve_circulant_tridiagonal(off, diag, &ys)?;
    Ok(sx
        .into_iter()
        .zip(sy)
        .map(|(x, y)| Point::new(x, y))
        .collect())
}

/// The three boundary tiers of one round and the segments between them.
#[derive(Debug, Clone)]
pub struct WaveRegions<S> {
    /// Boundary positions at the start of the round, in cycle order.
    pub tier0: Vec<Point<S>>,
    /// One averaging ahead: the boundary at the end of the round.
    pub tier1: Vec<Point<S>>,
    /// Two averagings ahead: inner rim of the new wave region.
    pub tier2: Vec<Point<S>>,
    /// Segments between tier 0 and tier 1.
    pub old_segments: Vec<WaveSegment<S>>,
    /// Segments between tier 1 and tier 2.
    pub new_segments: Vec<WaveSegment<S>>,
}

fn segments_between<S: Scalar>(outer: &[Point<S>], inner: &[Point<S>]) -> Vec<WaveSegment<S>> {
    let m = outer.len();
    (0..m)
        .map(|k| {
            WaveSegment::new(
                k,
                outer[k],
                outer[(k + 1) % m],
                inner[(k + 1) % m],
                inner[k],
            )
        })
        .collect()
}

/// Builds the tier structure from the boundary positions of this round.
pub fn wave_regions<S: Scalar>(tier0: Vec<Point<S>>, epsilon: S) -> WaveRegions<S> {
    let tier1 = boundary_average(&tier0, epsilon);
    let tier2 = boundary_average(&tier1, epsilon);
    let old_segments = segments_between(&tier0, &tier1);
    let new_segments = segments_between(&tier1, &tier2);
    WaveRegions {
        tier0,
        tier1,
        tier2,
        old_segments,
        new_segments,
    }
}

/// Which tier ring a wave robot currently occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveTier {
    /// Between tier 0 and tier 1.
    Old,
    /// Between tier 1 and tier 2.
    New,
}

/// Role of one robot in one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Role<S> {
    /// On the boundary cycle, at this slot in cycle order.
    Boundary { slot: usize },
    /// Riding the wave in segment `slot` of the given ring.
    Wave {
        tier: WaveTier,
        slot: usize,
        coord: SegCoord<S>,
    },
    /// Strictly inside tier 2; does not move.
    Inner,
}

impl<S> Role<S> {
    pub fn label(&self) -> &'static str {
        match self {
            Role::Boundary { .. } => "boundary",
            Role::Wave { .. } => "wave",
            Role::Inner => "inner",
        }
    }
}

/// Everything produced by one wave round: the next configuration plus the
/// data audits need to re-verify it.
#[derive(Debug, Clone)]
pub struct WaveOutcome<S> {
    pub next: Configuration<S>,
    pub roles: Vec<Role<S>>,
    pub regions: WaveRegions<S>,
    pub cycle: BoundaryCycle<S>,
}

/// Slack accepted on segment chart coordinates when locating robots.
const COORD_TOL: f64 = 1e-7;

fn classify_robot<S: Scalar>(
    p: Point<S>,
    regions: &WaveRegions<S>,
    tol: S,
) -> Option<(WaveTier, usize, SegCoord<S>)> {
    for seg in &regions.old_segments {
        if let Some(coord) = seg.to_coord(p, tol) {
            return Some((WaveTier::Old, seg.slot, coord));
        }
    }
    for seg in &regions.new_segments {
        if let Some(coord) = seg.to_coord(p, tol) {
            return Some((WaveTier::New, seg.slot, coord));
        }
    }
    None
}

/// Validates the boundary for a wave round: connected, non-degenerate,
/// convex, and (optionally) no oversized empty circle inside the region.
fn checked_cycle<S: Scalar>(
    config: &Configuration<S>,
    params: &WaveParams<S>,
) -> Result<BoundaryCycle<S>, WaveError> {
    let cycle = connectivity_boundary(config, S::lit(1e-9))?;
    if cycle.degenerate {
        return Err(WaveError::DegenerateBoundary);
    }
    if !is_convex_cycle(&cycle, S::lit(1e-9)) {
        return Err(WaveError::NonConvexBoundary);
    }
    if let Some(delta) = params.hole_check_delta {
        let circle = crate::geom::largest_empty_circle(config, &cycle)?;
        if circle.diameter() >= delta {
            return Err(WaveError::RegionHasHole {
                diameter: circle.diameter().to_f64().unwrap_or(f64::NAN),
                limit: delta.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(cycle)
}

/// One synchronous round of the contracting wave.
pub fn main_step<S: Scalar>(
    config: &Configuration<S>,
    params: &WaveParams<S>,
) -> Result<WaveOutcome<S>, WaveError> {
    let cycle = checked_cycle(config, params)?;
    let regions = wave_regions(cycle.positions.clone(), params.epsilon);
    let tol = S::lit(COORD_TOL);
    let half = S::lit(0.5);

    // slot_of[robot] = its index along the cycle, if on the boundary.
    let n = config.len();
    let mut slot_of = vec![usize::MAX; n];
    for (slot, &robot) in cycle.indices.iter().enumerate() {
        slot_of[robot] = slot;
    }

    let mut roles = Vec::with_capacity(n);
    let mut next = Vec::with_capacity(n);
    for i in 0..n {
        let p = config[i];
        if slot_of[i] != usize::MAX {
            let slot = slot_of[i];
            roles.push(Role::Boundary { slot });
            next.push(regions.tier1[slot]);
            continue;
        }
        if let Some((tier, slot, coord)) = classify_robot(p, &regions, tol) {
            let mapped = match tier {
                WaveTier::Old => SegCoord {
                    depth: coord.depth.max(S::zero()).min(S::one()) * half,
                    side: coord.side.max(S::zero()).min(S::one()),
                },
                WaveTier::New => SegCoord {
                    depth: half + coord.depth.max(S::zero()).min(S::one()) * half,
                    side: coord.side.max(S::zero()).min(S::one()),
                },
            };
            roles.push(Role::Wave { tier, slot, coord });
            next.push(regions.new_segments[slot].from_coord(mapped));
            continue;
        }
        match point_in_polygon(&regions.tier2, p, S::lit(1e-9)) {
            PolygonLocation::Inside | PolygonLocation::OnBoundary => {
                roles.push(Role::Inner);
                next.push(p);
            }
            PolygonLocation::Outside => {
                return Err(WaveError::RobotOutsideRegions { index: i });
            }
        }
    }
    Ok(WaveOutcome {
        next: Configuration::new(next)?,
        roles,
        regions,
        cycle,
    })
}

/// Reconstructs the configuration before a wave round from the one after
/// it. `after` must be the image of a valid round: its boundary is the
/// averaged cycle, every wave robot sits in the merged ring at halved
/// depth, and inner robots are untouched.
pub fn invert_round<S: Scalar>(
    after: &Configuration<S>,
    params: &WaveParams<S>,
) -> Result<Configuration<S>, WaveError> {
    let cycle = connectivity_boundary(after, S::lit(1e-9))?;
    if cycle.degenerate {
        return Err(WaveError::InvalidPreimageBoundary {
            reason: "boundary is degenerate",
        });
    }
    if !is_convex_cycle(&cycle, S::lit(1e-9)) {
        return Err(WaveError::InvalidPreimageBoundary {
            reason: "boundary is not convex",
        });
    }
    // The observed boundary is tier 1; undo one averaging for tier 0.
    let tier1 = cycle.positions.clone();
    let tier0 = boundary_average_invert(&tier1, params.epsilon)?;
    let m = tier0.len();
    let unit_slack = S::one() + S::lit(1e-6);
    for k in 0..m {
        if tier0[k].dist(tier0[(k + 1) % m]) > unit_slack {
            return Err(WaveError::InvalidPreimageBoundary {
                reason: "reconstructed boundary breaks unit connectivity",
            });
        }
    }
    let hull: Vec<usize> = crate::geom::convex_hull(&tier0, S::lit(1e-9));
    if hull.len() < 3 {
        return Err(WaveError::InvalidPreimageBoundary {
            reason: "reconstructed boundary is degenerate",
        });
    }
    if !crate::geom::is_convex_ccw(&tier0, S::lit(1e-9)) {
        return Err(WaveError::InvalidPreimageBoundary {
            reason: "reconstructed boundary is not convex",
        });
    }

    let tier2 = boundary_average(&tier1, params.epsilon);
    let old_segments = segments_between(&tier0, &tier1);
    let new_segments = segments_between(&tier1, &tier2);
    let tol = S::lit(COORD_TOL);
    let half = S::lit(0.5);

    let n = after.len();
    let mut slot_of = vec![usize::MAX; n];
    for (slot, &robot) in cycle.indices.iter().enumerate() {
        slot_of[robot] = slot;
    }

    let mut previous = Vec::with_capacity(n);
    for i in 0..n {
        let p = after[i];
        if slot_of[i] != usize::MAX {
            previous.push(tier0[slot_of[i]]);
            continue;
        }
        if let Some(seg) = new_segments
            .iter()
            .find_map(|seg| seg.to_coord(p, tol).map(|c| (seg.slot, c)))
        {
            let (slot, coord) = seg;
            let depth = coord.depth.max(S::zero()).min(S::one());
            let side = coord.side.max(S::zero()).min(S::one());
            if depth <= half {
                // Front half: came from the old ring at doubled depth.
                let orig = SegCoord {
                    depth: depth * S::lit(2.0),
                    side,
                };
                previous.push(old_segments[slot].from_coord(orig));
            } else {
                // Back half: came from the new ring itself.
                let orig = SegCoord {
                    depth: depth * S::lit(2.0) - S::one(),
                    side,
                };
                previous.push(new_segments[slot].from_coord(orig));
            }
            continue;
        }
        match point_in_polygon(&tier2, p, S::lit(1e-9)) {
            PolygonLocation::Inside | PolygonLocation::OnBoundary => previous.push(p),
            PolygonLocation::Outside => return Err(WaveError::NotInImage { index: i }),
        }
    }
    Ok(Configuration::new(previous)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_ring(n_side: usize, spacing: f64) -> Vec<(f64, f64)> {
        // Filled square grid.
        let mut pts = Vec::new();
        for i in 0..n_side {
            for j in 0..n_side {
                pts.push((spacing * i as f64, spacing * j as f64));
            }
        }
        pts
    }

    #[test]
    fn averaging_matches_hand_example() {
        // Unit square, eps = 0.4: each corner moves toward the center of
        // its two neighbors, which is the square's center.
        let square = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let avg = boundary_average(&square, 0.4);
        assert!(avg[0].dist(Point::new(0.2, 0.2)) < 1e-15);
        assert!(avg[2].dist(Point::new(0.8, 0.8)) < 1e-15);
    }

    #[test]
    fn averaging_scales_regular_polygons() {
        for m in [3usize, 5, 8, 60] {
            let eps = 0.3;
            let poly: Vec<Point<f64>> = (0..m)
                .map(|k| {
                    let a = std::f64::consts::TAU * k as f64 / m as f64;
                    Point::new(2.0 * a.cos(), 2.0 * a.sin())
                })
                .collect();
            let avg = boundary_average(&poly, eps);
            let factor = 1.0 - eps * (1.0 - (std::f64::consts::TAU / m as f64).cos());
            for k in 0..m {
                assert!(
                    avg[k].dist(poly[k] * factor) < 1e-12,
                    "m={} k={}",
                    m,
                    k
                );
            }
        }
    }

    #[test]
    fn averaging_inverts_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(51);
        for &m in &[3usize, 4, 7, 40, 200] {
            // Convex-ish cycle: polar graph with mild radius noise.
            let cycle: Vec<Point<f64>> = (0..m)
                .map(|k| {
                    let a = std::f64::consts::TAU * k as f64 / m as f64;
                    let r = 3.0 + rng.gen_range(-0.2..0.2);
                    Point::new(r * a.cos(), r * a.sin())
                })
                .collect();
            for eps in [0.1, 0.3, 0.49] {
                let fwd = boundary_average(&cycle, eps);
                let back = boundary_average_invert(&fwd, eps).unwrap();
                for k in 0..m {
                    assert!(back[k].dist(cycle[k]) < 1e-9, "m={} k={} eps={}", m, k, eps);
                }
            }
        }
    }

    #[test]
    fn boundary_robots_move_others_classified() {
        let pts = square_ring(5, 0.7);
        let config = Configuration::from_pairs(&pts).unwrap();
        let params = WaveParams::new(0.3).unwrap();
        let out = main_step(&config, &params).unwrap();
        // 16 perimeter robots are boundary, the rest start as inner
        // because the first wave ring is thin.
        let boundary_count = out
            .roles
            .iter()
            .filter(|r| matches!(r, Role::Boundary { .. }))
            .count();
        assert_eq!(boundary_count, 16);
        // Boundary robots land exactly on their averaged vertex: corner
        // robots move, flat-edge robots are averaging fixed points, and
        // inner robots stay put.
        for i in 0..config.len() {
            match out.roles[i] {
                Role::Boundary { slot } => {
                    assert_eq!(out.next[i], out.regions.tier1[slot]);
                }
                Role::Inner => assert_eq!(out.next[i], config[i]),
                Role::Wave { .. } => {}
            }
        }
        for corner in [0, 4, 20, 24] {
            assert!(out.next[corner].dist(config[corner]) > 1e-6);
        }
        let flat_edge = 2;
        assert!(out.next[flat_edge].dist(config[flat_edge]) < 1e-12);
    }

    #[test]
    fn wave_robot_rides_to_half_depth() {
        // A 9-robot ring with one robot placed in the old ring region.
        let m = 8;
        let mut pts: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                (1.3 * a.cos(), 1.3 * a.sin())
            })
            .collect();
        let params = WaveParams::new(0.25).unwrap().with_hole_check(None);
        // Tier geometry in cycle order, which is what main_step builds on.
        let ring = Configuration::from_pairs(&pts).unwrap();
        let cycle = connectivity_boundary(&ring, 1e-9).unwrap();
        let regions = wave_regions(cycle.positions.clone(), params.epsilon);
        // Drop a robot mid-segment of the old ring.
        let probe = regions.old_segments[2].from_coord(SegCoord {
            depth: 0.6,
            side: 0.45,
        });
        pts.push((probe.x, probe.y));
        let config = Configuration::from_pairs(&pts).unwrap();
        let out = main_step(&config, &params).unwrap();
        match out.roles[m] {
            Role::Wave { tier, slot, coord } => {
                assert_eq!(tier, WaveTier::Old);
                assert_eq!(slot, 2);
                assert!((coord.depth - 0.6).abs() < 1e-9);
                assert!((coord.side - 0.45).abs() < 1e-9);
            }
            ref other => panic!("expected wave role, got {:?}", other),
        }
        let expect = out.regions.new_segments[2].from_coord(SegCoord {
            depth: 0.3,
            side: 0.45,
        });
        assert!(out.next[m].dist(expect) < 1e-9);
    }

    #[test]
    fn rejects_non_convex_boundary() {
        // A dented blob: connectivity boundary exists but is not convex.
        let pts = [
            (0.0, 0.0),
            (0.7, 0.0),
            (1.4, 0.0),
            (1.4, 0.7),
            (1.4, 1.4),
            (0.7, 1.0), // dent
            (0.0, 1.4),
            (0.0, 0.7),
        ];
        let config = Configuration::from_pairs(&pts).unwrap();
        let params = WaveParams::new(0.3).unwrap().with_hole_check(None);
        assert!(matches!(
            main_step(&config, &params),
            Err(WaveError::NonConvexBoundary)
        ));
    }

    #[test]
    fn rejects_oversized_holes_when_enabled() {
        let pts = square_ring(4, 0.9);
        let config = Configuration::from_pairs(&pts).unwrap();
        // Cell circumdiameter 0.9 * sqrt(2) = 1.27 exceeds the unit limit.
        let with_check = WaveParams::new(0.3).unwrap();
        assert!(matches!(
            main_step(&config, &with_check),
            Err(WaveError::RegionHasHole { .. })
        ));
        let without = with_check.with_hole_check(None);
        assert!(main_step(&config, &without).is_ok());
        // Tighter grids pass the default unit check.
        let dense = Configuration::from_pairs(&square_ring(5, 0.7)).unwrap();
        assert!(main_step(&dense, &WaveParams::new(0.3).unwrap()).is_ok());
    }

    #[test]
    fn invert_reconstructs_rounds() {
        let params = WaveParams::new(0.3).unwrap();
        let pts = square_ring(7, 0.7);
        let mut config = Configuration::from_pairs(&pts).unwrap();
        // March several rounds so wave robots exist, inverting each.
        for round in 0..40 {
            let out = main_step(&config, &params).unwrap();
            let back = invert_round(&out.next, &params).unwrap();
            let mut worst = 0.0f64;
            for i in 0..config.len() {
                worst = worst.max(back[i].dist(config[i]));
            }
            assert!(worst < 1e-9, "round {}: inversion error {}", round, worst);
            config = out.next;
        }
    }

    #[test]
    fn invert_pulls_new_ring_riders_back_to_the_old_ring() {
        // An octagon with one robot in the old ring at known coordinates:
        // the step halves its depth into the new ring, and the inverse
        // must double the depth back to the original point.
        let m = 8;
        let mut pts: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                (1.3 * a.cos(), 1.3 * a.sin())
            })
            .collect();
        let params = WaveParams::new(0.3).unwrap().with_hole_check(None);
        let ring = Configuration::from_pairs(&pts).unwrap();
        let cycle = connectivity_boundary(&ring, 1e-9).unwrap();
        let regions = wave_regions(cycle.positions.clone(), params.epsilon);
        let probe = regions.old_segments[1].from_coord(SegCoord {
            depth: 0.4,
            side: 0.5,
        });
        pts.push((probe.x, probe.y));
        let config = Configuration::from_pairs(&pts).unwrap();
        let out = main_step(&config, &params).unwrap();
        assert!(matches!(
            out.roles[m],
            Role::Wave {
                tier: WaveTier::Old,
                ..
            }
        ));
        let back = invert_round(&out.next, &params).unwrap();
        for i in 0..config.len() {
            assert!(
                back[i].dist(config[i]) < 1e-9,
                "robot {} reconstructed {:?} from {:?}",
                i,
                back[i],
                config[i]
            );
        }
    }

    #[test]
    fn invert_requires_a_convex_boundary() {
        let pts = [
            (0.0, 0.0),
            (0.7, 0.0),
            (1.4, 0.0),
            (1.4, 0.7),
            (1.4, 1.4),
            (0.7, 1.0),
            (0.0, 1.4),
            (0.0, 0.7),
        ];
        let after = Configuration::from_pairs(&pts).unwrap();
        let params = WaveParams::new(0.3).unwrap();
        let err = invert_round(&after, &params).unwrap_err();
        assert!(matches!(err, WaveError::InvalidPreimageBoundary { .. }));
    }

    #[test]
    fn step_commutes_with_rotation() {
        let pts = square_ring(6, 0.7);
        let config = Configuration::from_pairs(&pts).unwrap();
        let params = WaveParams::new(0.2).unwrap();
        let angle = 0.77;
        let rotated = Configuration::new(
            config.positions().iter().map(|p| p.rotated(angle)).collect(),
        )
        .unwrap();
        let a = main_step(&rotated, &params).unwrap().next;
        let b = main_step(&config, &params).unwrap().next;
        for i in 0..config.len() {
            assert!(
                a[i].dist(b[i].rotated(angle)) < 1e-9,
                "robot {}: {:?} vs {:?}",
                i,
                a[i],
                b[i].rotated(angle)
            );
        }
    }
}
