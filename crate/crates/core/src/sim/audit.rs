//! Named per-round property checks on a step's before/after pair.
//!
//! Every check recomputes what it needs from the two configurations, so
//! the same auditor verifies a live run and a persisted trace. Failures
//! are recorded outcomes, never errors.

use std::collections::{BTreeMap, BTreeSet};

use crate::geom::{
    connectivity_boundary, convex_hull, convex_intersection_area, disc_graph, is_convex_cycle,
    largest_empty_circle, point_in_polygon, signed_area, Configuration, Point, PolygonLocation,
};
use crate::gta::{gershgorin_certify, jacobian};
use crate::symmetry::{detect_symmetries, symmetry_preserved};
use crate::wave::local::LOCAL_SURROUND;
use crate::wave::segment::SegmentDegeneracy;
use crate::wave::{invert_round, main_step, Role, WaveOutcome};

use super::{AuditOutcome, Protocol, Scenario, GEOM_TOL, SYM_TOL};

/// Residual bound for reconstructing the pre-image of a wave round.
pub const INVERT_TOL: f64 = 1e-8;

/// Tolerated pairwise overlap area between wave segment triangles.
pub const OVERLAP_TOL: f64 = 1e-12;

/// Every audit name the scenario format accepts.
pub const AUDIT_NAMES: [&str; 11] = [
    "symmetry_preserved",
    "collision_free",
    "convexity",
    "hull_area_monotone",
    "gershgorin_certified",
    "boundary_identity",
    "hole_bound",
    "invert_roundtrip",
    "segment_non_overlap",
    "degeneracy_flow",
    "corner_distance",
];

/// The standard audit set for a protocol: every check whose property the
/// protocol guarantees.
pub fn default_audits(protocol: Protocol) -> Vec<String> {
    let names: &[&str] = match protocol {
        Protocol::Gta => &[
            "symmetry_preserved",
            "collision_free",
            "hull_area_monotone",
            "gershgorin_certified",
        ],
        Protocol::Wave => &[
            "symmetry_preserved",
            "collision_free",
            "convexity",
            "hull_area_monotone",
            "boundary_identity",
            "hole_bound",
            "invert_roundtrip",
            "segment_non_overlap",
            "degeneracy_flow",
            "corner_distance",
        ],
    };
    names.iter().map(|s| s.to_string()).collect()
}

/// Runs the scenario's enabled audits on one step.
pub fn audit_round(
    scenario: &Scenario,
    before: &Configuration<f64>,
    after: &Configuration<f64>,
) -> BTreeMap<String, AuditOutcome> {
    let mut results = BTreeMap::new();
    let enabled: Vec<&str> = scenario.audits.iter().map(String::as_str).collect();
    if enabled.is_empty() {
        return results;
    }

    // The wave structural audits all read the same recomputed round.
    let needs_outcome = enabled.iter().any(|n| {
        matches!(
            *n,
            "boundary_identity" | "segment_non_overlap" | "degeneracy_flow" | "corner_distance"
        )
    });
    let outcome = if scenario.protocol == Protocol::Wave && needs_outcome {
        Some(
            scenario
                .wave_params()
                .map_err(|e| e.to_string())
                .and_then(|p| main_step(before, &p).map_err(|e| e.to_string())),
        )
    } else {
        None
    };

    for name in enabled {
        let outcome = match name {
            "symmetry_preserved" => check_symmetry(before, after),
            "collision_free" => check_collisions(before, after),
            "convexity" => check_convexity(before, after),
            "hull_area_monotone" => check_hull_area(scenario.protocol, before, after),
            "gershgorin_certified" => check_gershgorin(scenario, before),
            "boundary_identity" => with_outcome(&outcome, after, check_boundary_identity),
            "hole_bound" => check_hole_bound(after),
            "invert_roundtrip" => check_invert(scenario, before, after),
            "segment_non_overlap" => with_outcome(&outcome, after, |o, _| check_overlap(o)),
            "degeneracy_flow" => with_outcome(&outcome, after, |o, _| check_degeneracy(o)),
            "corner_distance" => {
                with_outcome(&outcome, after, |o, _| check_corner_distance(scenario, o))
            }
            _ => AuditOutcome {
                pass: false,
                detail: format!("unknown audit {name:?}"),
            },
        };
        results.insert(name.to_string(), outcome);
    }
    results
}

fn with_outcome(
    outcome: &Option<Result<WaveOutcome<f64>, String>>,
    after: &Configuration<f64>,
    check: impl Fn(&WaveOutcome<f64>, &Configuration<f64>) -> AuditOutcome,
) -> AuditOutcome {
    match outcome {
        Some(Ok(o)) => check(o, after),
        Some(Err(e)) => AuditOutcome {
            pass: false,
            detail: format!("step recomputation failed: {e}"),
        },
        None => AuditOutcome {
            pass: false,
            detail: "audit requires the wave protocol".into(),
        },
    }
}

fn check_symmetry(before: &Configuration<f64>, after: &Configuration<f64>) -> AuditOutcome {
    let gb = match detect_symmetries(before, SYM_TOL) {
        Ok(g) => g,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: format!("before: {e}"),
            }
        }
    };
    let ga = match detect_symmetries(after, SYM_TOL) {
        Ok(g) => g,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: format!("after: {e}"),
            }
        }
    };
    let change = symmetry_preserved(&gb, &ga, SYM_TOL);
    AuditOutcome {
        pass: change.lost.is_empty() && change.gained.is_empty(),
        detail: format!(
            "order {} -> {}, lost {}, gained {}",
            gb.elements.len(),
            ga.elements.len(),
            change.lost.len(),
            change.gained.len()
        ),
    }
}

/// A round never introduces a collision: robots pairwise distinct before
/// the step stay pairwise distinct after it. Rounds that already start
/// with coincident robots are vacuous.
fn check_collisions(before: &Configuration<f64>, after: &Configuration<f64>) -> AuditOutcome {
    if before.len() > 1 && before.min_pairwise_dist() <= 0.0 {
        return AuditOutcome {
            pass: true,
            detail: "coincident robots predate the round".into(),
        };
    }
    let min = after.min_pairwise_dist();
    AuditOutcome {
        pass: min > 0.0 || after.len() == 1,
        detail: format!("min pairwise distance {min}"),
    }
}

/// New boundary stays convex and inside the old one.
fn check_convexity(before: &Configuration<f64>, after: &Configuration<f64>) -> AuditOutcome {
    let cb = match connectivity_boundary(before, GEOM_TOL) {
        Ok(c) => c,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: format!("before boundary: {e}"),
            }
        }
    };
    let ca = match connectivity_boundary(after, GEOM_TOL) {
        Ok(c) => c,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: format!("after boundary: {e}"),
            }
        }
    };
    if ca.degenerate {
        // A fully collinear boundary is trivially convex; containment
        // still applies.
        for p in &ca.positions {
            if cb.degenerate {
                break;
            }
            if point_in_polygon(&cb.positions, *p, GEOM_TOL) == PolygonLocation::Outside {
                return AuditOutcome {
                    pass: false,
                    detail: format!("degenerate boundary point ({}, {}) escaped", p.x, p.y),
                };
            }
        }
        return AuditOutcome {
            pass: true,
            detail: "degenerate (collinear) boundary".into(),
        };
    }
    if !is_convex_cycle(&ca, GEOM_TOL) {
        return AuditOutcome {
            pass: false,
            detail: "after boundary is not convex".into(),
        };
    }
    if !cb.degenerate {
        for p in &ca.positions {
            if point_in_polygon(&cb.positions, *p, GEOM_TOL) == PolygonLocation::Outside {
                return AuditOutcome {
                    pass: false,
                    detail: format!("boundary point ({}, {}) left the previous hull", p.x, p.y),
                };
            }
        }
    }
    AuditOutcome {
        pass: true,
        detail: format!("convex, {} vertices contained", ca.positions.len()),
    }
}

fn hull_area(config: &Configuration<f64>) -> f64 {
    let pts = config.positions();
    let hull = convex_hull(pts, GEOM_TOL);
    if hull.len() < 3 {
        return 0.0;
    }
    let poly: Vec<Point<f64>> = hull.iter().map(|&i| pts[i]).collect();
    signed_area(&poly).abs()
}

/// Wave rounds strictly shrink the hull; gta rounds never grow it.
fn check_hull_area(
    protocol: Protocol,
    before: &Configuration<f64>,
    after: &Configuration<f64>,
) -> AuditOutcome {
    let a0 = hull_area(before);
    let a1 = hull_area(after);
    let pass = match protocol {
        Protocol::Wave => a1 < a0 || (a0 <= OVERLAP_TOL && a1 <= OVERLAP_TOL),
        Protocol::Gta => a1 <= a0 + OVERLAP_TOL,
    };
    AuditOutcome {
        pass,
        detail: format!("hull area {a0} -> {a1}"),
    }
}

fn check_gershgorin(scenario: &Scenario, before: &Configuration<f64>) -> AuditOutcome {
    if scenario.protocol != Protocol::Gta {
        return AuditOutcome {
            pass: false,
            detail: "audit requires the gta protocol".into(),
        };
    }
    let params = match scenario.gta_params() {
        Ok(p) => p,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let cert = gershgorin_certify(&jacobian(before, &params));
    AuditOutcome {
        pass: cert.certified,
        detail: format!(
            "smallest diagonal gap {} (row {})",
            cert.min_gap, cert.worst_row
        ),
    }
}

/// The robots on the new boundary are exactly the old boundary robots at
/// their averaged positions.
fn check_boundary_identity(
    outcome: &WaveOutcome<f64>,
    after: &Configuration<f64>,
) -> AuditOutcome {
    let expected: BTreeSet<usize> = outcome
        .roles
        .iter()
        .enumerate()
        .filter_map(|(i, r)| matches!(r, Role::Boundary { .. }).then_some(i))
        .collect();
    let ca = match connectivity_boundary(after, GEOM_TOL) {
        Ok(c) => c,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: format!("after boundary: {e}"),
            }
        }
    };
    let actual: BTreeSet<usize> = ca.member_set().into_iter().collect();
    if expected != actual {
        return AuditOutcome {
            pass: false,
            detail: format!(
                "boundary membership changed: {} stepped vs {} observed",
                expected.len(),
                actual.len()
            ),
        };
    }
    let mut worst = 0.0f64;
    for (i, role) in outcome.roles.iter().enumerate() {
        if let Role::Boundary { slot } = role {
            worst = worst.max(after[i].dist(outcome.regions.tier1[*slot]));
        }
    }
    AuditOutcome {
        pass: worst <= 1e-12,
        detail: format!("{} boundary robots, worst offset {worst}", expected.len()),
    }
}

/// No hole of diameter 2.24 or more: the threshold below which local
/// boundary certification stays sound.
fn check_hole_bound(after: &Configuration<f64>) -> AuditOutcome {
    if !disc_graph(after, 1.0, GEOM_TOL).is_connected() {
        return AuditOutcome {
            pass: false,
            detail: "configuration disconnected".into(),
        };
    }
    let cycle = match connectivity_boundary(after, GEOM_TOL) {
        Ok(c) => c,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: format!("boundary: {e}"),
            }
        }
    };
    if cycle.degenerate {
        return AuditOutcome {
            pass: true,
            detail: "zero-area region holds no holes".into(),
        };
    }
    match largest_empty_circle(after, &cycle) {
        Ok(circle) => {
            let d = circle.diameter();
            AuditOutcome {
                pass: d < LOCAL_SURROUND,
                detail: format!("largest empty diameter {d}, unit hole: {}", d >= 1.0),
            }
        }
        Err(e) => AuditOutcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn check_invert(
    scenario: &Scenario,
    before: &Configuration<f64>,
    after: &Configuration<f64>,
) -> AuditOutcome {
    if scenario.protocol != Protocol::Wave {
        return AuditOutcome {
            pass: false,
            detail: "audit requires the wave protocol".into(),
        };
    }
    let params = match scenario.wave_params() {
        Ok(p) => p,
        Err(e) => {
            return AuditOutcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    match invert_round(after, &params) {
        Ok(reconstructed) => {
            let mut worst = 0.0f64;
            for i in 0..before.len() {
                worst = worst.max(reconstructed[i].dist(before[i]));
            }
            AuditOutcome {
                pass: worst <= INVERT_TOL,
                detail: format!("reconstruction residual {worst}"),
            }
        }
        Err(e) => AuditOutcome {
            pass: false,
            detail: e.to_string(),
        },
    }
}

/// Interiors of the round's wave segments are pairwise disjoint.
fn check_overlap(outcome: &WaveOutcome<f64>) -> AuditOutcome {
    struct Tri {
        quad: usize,
        pts: [Point<f64>; 3],
        min: Point<f64>,
        max: Point<f64>,
    }
    let mut tris = Vec::new();
    let segments = outcome
        .regions
        .old_segments
        .iter()
        .chain(outcome.regions.new_segments.iter());
    for (quad, seg) in segments.enumerate() {
        for pts in seg.triangles() {
            let min = Point::new(
                pts[0].x.min(pts[1].x).min(pts[2].x),
                pts[0].y.min(pts[1].y).min(pts[2].y),
            );
            let max = Point::new(
                pts[0].x.max(pts[1].x).max(pts[2].x),
                pts[0].y.max(pts[1].y).max(pts[2].y),
            );
            tris.push(Tri {
                quad,
                pts,
                min,
                max,
            });
        }
    }
    let mut worst = 0.0f64;
    for i in 0..tris.len() {
        for j in (i + 1)..tris.len() {
            let (a, b) = (&tris[i], &tris[j]);
            if a.quad == b.quad {
                continue;
            }
            if a.max.x < b.min.x || b.max.x < a.min.x || a.max.y < b.min.y || b.max.y < a.min.y {
                continue;
            }
            worst = worst.max(convex_intersection_area(&a.pts, &b.pts));
        }
    }
    AuditOutcome {
        pass: worst <= OVERLAP_TOL,
        detail: format!("worst pairwise overlap area {worst}"),
    }
}

/// Riding a segment inward never makes it more degenerate.
fn check_degeneracy(outcome: &WaveOutcome<f64>) -> AuditOutcome {
    let regions = &outcome.regions;
    for (k, (old, new)) in regions
        .old_segments
        .iter()
        .zip(regions.new_segments.iter())
        .enumerate()
    {
        if new.degeneracy > old.degeneracy {
            return AuditOutcome {
                pass: false,
                detail: format!(
                    "slot {k}: {:?} deepened to {:?}",
                    old.degeneracy, new.degeneracy
                ),
            };
        }
    }
    let full = regions
        .old_segments
        .iter()
        .filter(|s| s.degeneracy == SegmentDegeneracy::Full)
        .count();
    AuditOutcome {
        pass: true,
        detail: format!(
            "{} slots, {} fully degenerate outer segments",
            regions.old_segments.len(),
            full
        ),
    }
}

/// Averaged neighbors separate by at most 1 + eps^2/2.
fn check_corner_distance(scenario: &Scenario, outcome: &WaveOutcome<f64>) -> AuditOutcome {
    let tier1 = &outcome.regions.tier1;
    let m = tier1.len();
    let mut worst = 0.0f64;
    for k in 0..m {
        worst = worst.max(tier1[k].dist(tier1[(k + 1) % m]));
    }
    let limit = 1.0 + scenario.epsilon * scenario.epsilon / 2.0;
    AuditOutcome {
        pass: worst <= limit + GEOM_TOL,
        detail: format!("longest averaged edge {worst}, limit {limit}"),
    }
}
