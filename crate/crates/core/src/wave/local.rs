//! Per-robot execution of the wave protocol under bounded visibility.
//!
//! [`main_step`] computes the round from the whole configuration at once.
//! Here every robot re-derives its own role and target using nothing but
//! the robots inside its viewing range, and [`verify_local_executability`]
//! checks that the two computations agree robot by robot.
//!
//! The local derivation rests on three observations:
//!
//! * Boundary membership of a robot `q` is decided by the convex hull of
//!   `q`'s [`LOCAL_SURROUND`]-surrounding, so any robot that sees that
//!   whole surrounding can certify `q`'s status.
//! * Consecutive boundary robots are within unit distance, and their cycle
//!   adjacency is visible in the hull border of a unit surrounding, so a
//!   certified seed can be extended into a chain of boundary robots.
//! * A window of six consecutive boundary robots determines the two
//!   averaged tiers over its central edge, hence the wave segments there,
//!   using the same arithmetic as the global step.
//!
//! With the default viewing range every chain reaches far enough to cover
//! the window of whichever segment holds the robot; with a short range the
//! derivation degrades to "stay put", which the verifier reports.

use std::collections::VecDeque;

use super::segment::{SegCoord, WaveSegment};
use super::{averaged_vertex, main_step, Role, WaveError, WaveParams, WaveTier, COORD_TOL};
use crate::geom::{hull_border, on_hull_border, orient2d, Configuration, Point};
use crate::scalar::Scalar;

/// Radius of the surrounding whose convex hull decides boundary
/// membership. A robot can certify another robot's status only when it
/// sees this whole surrounding, so the viewing range must exceed it.
pub const LOCAL_SURROUND: f64 = 2.24;

/// What one robot decides for itself from its own view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDecision<S> {
    /// "boundary", "wave", or "inner".
    pub label: &'static str,
    /// Ring occupied when the label is "wave".
    pub tier: Option<WaveTier>,
    /// Where the robot moves this round.
    pub target: Point<S>,
}

/// One robot whose local decision differs from the global step.
#[derive(Debug, Clone)]
pub struct LocalDisagreement<S> {
    pub index: usize,
    pub local: LocalDecision<S>,
    pub global: LocalDecision<S>,
}

/// Outcome of checking every robot's local decision against the global
/// round.
#[derive(Debug, Clone)]
pub struct LocalReport<S> {
    pub decisions: Vec<LocalDecision<S>>,
    pub disagreements: Vec<LocalDisagreement<S>>,
}

impl<S> LocalReport<S> {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs the global round and re-derives every robot's move from its
/// bounded view, reporting all robots where the two disagree in role kind,
/// ring, or target position (beyond 1e-9).
pub fn verify_local_executability<S: Scalar>(
    config: &Configuration<S>,
    params: &WaveParams<S>,
) -> Result<LocalReport<S>, WaveError> {
    let outcome = main_step(config, params)?;
    let positions = config.positions();
    let n = config.len();
    let mut decisions = Vec::with_capacity(n);
    let mut disagreements = Vec::new();
    for i in 0..n {
        let local = decide_local(positions, i, params);
        let global = LocalDecision {
            label: outcome.roles[i].label(),
            tier: match outcome.roles[i] {
                Role::Wave { tier, .. } => Some(tier),
                _ => None,
            },
            target: outcome.next[i],
        };
        let agree = local.label == global.label
            && local.tier == global.tier
            && local.target.dist(global.target) <= S::lit(1e-9);
        if !agree {
            disagreements.push(LocalDisagreement {
                index: i,
                local,
                global,
            });
        }
        decisions.push(local);
    }
    Ok(LocalReport {
        decisions,
        disagreements,
    })
}

/// The move computation of a single robot, restricted to its view.
fn decide_local<S: Scalar>(positions: &[Point<S>], index: usize, params: &WaveParams<S>) -> LocalDecision<S> {
    let p = positions[index];
    let range = params.viewing_range;
    let tol = S::lit(1e-9);
    let surround = S::lit(LOCAL_SURROUND);
    let stay = LocalDecision {
        label: "inner",
        tier: None,
        target: p,
    };

    // Everything below may only touch this set.
    let mut vis: Vec<Point<S>> = Vec::new();
    let mut self_vis = 0;
    for (j, &q) in positions.iter().enumerate() {
        if p.dist(q) <= range {
            if j == index {
                self_vis = vis.len();
            }
            vis.push(q);
        }
    }

    // Own boundary status is verifiable whenever the viewing range covers
    // the whole surrounding.
    if surround <= range && certified_boundary(&vis, self_vis, surround, tol) {
        match chain_neighbors(&vis, self_vis, tol) {
            Some((l, r)) => {
                return LocalDecision {
                    label: "boundary",
                    tier: None,
                    target: averaged_vertex(vis[l], p, vis[r], params.epsilon),
                };
            }
            // Cycle adjacency not recoverable: the robot cannot execute
            // its move, which the verifier will surface as a disagreement.
            None => return stay,
        }
    }

    // Nearest robot whose whole surrounding is visible and whose hull test
    // certifies it as boundary seeds the chain walk.
    let verify_reach = range - surround;
    let mut seed: Option<(S, usize)> = None;
    for (j, &q) in vis.iter().enumerate() {
        if j == self_vis {
            continue;
        }
        let d = p.dist(q);
        if d <= verify_reach
            && seed.map_or(true, |(best, _)| d < best)
            && certified_boundary(&vis, j, surround, tol)
        {
            seed = Some((d, j));
        }
    }
    let Some((_, seed)) = seed else {
        return stay;
    };

    let (chain, closed) = walk_chain(&vis, seed, p, range, tol);
    // A closed chain is the whole boundary cycle, so the windows wrap; an
    // open chain ends where visibility ran out and must not.
    let m = chain.len();
    let windows: Vec<[usize; 6]> = if closed && m >= 3 {
        (0..m)
            .map(|i| std::array::from_fn(|t| chain[(i + t) % m]))
            .collect()
    } else {
        chain
            .windows(6)
            .map(|w| [w[0], w[1], w[2], w[3], w[4], w[5]])
            .collect()
    };
    let half = S::lit(0.5);
    let coord_tol = S::lit(COORD_TOL);
    // Old ring first, then new, matching the global classification order.
    for pass in [WaveTier::Old, WaveTier::New] {
        for w in &windows {
            let mut q = [vis[w[0]], vis[w[1]], vis[w[2]], vis[w[3]], vis[w[4]], vis[w[5]]];
            // Orient the window so the interior, hence the robot, lies
            // left of the central edge. A robot collinear with that edge
            // would be on the boundary itself, so skipping is safe.
            let o = orient2d(q[2], q[3], p);
            if o < S::zero() {
                q.reverse();
            } else if o == S::zero() {
                continue;
            }
            let t1: Vec<Point<S>> = (1..=4)
                .map(|t| averaged_vertex(q[t - 1], q[t], q[t + 1], params.epsilon))
                .collect();
            let t2_under_2 = averaged_vertex(t1[0], t1[1], t1[2], params.epsilon);
            let t2_under_3 = averaged_vertex(t1[1], t1[2], t1[3], params.epsilon);
            let new_seg = WaveSegment::new(0, t1[1], t1[2], t2_under_3, t2_under_2);
            match pass {
                WaveTier::Old => {
                    let old_seg = WaveSegment::new(0, q[2], q[3], t1[2], t1[1]);
                    if let Some(c) = old_seg.to_coord(p, coord_tol) {
                        let mapped = SegCoord {
                            depth: c.depth.max(S::zero()).min(S::one()) * half,
                            side: c.side.max(S::zero()).min(S::one()),
                        };
                        return LocalDecision {
                            label: "wave",
                            tier: Some(WaveTier::Old),
                            target: new_seg.from_coord(mapped),
                        };
                    }
                }
                WaveTier::New => {
                    if let Some(c) = new_seg.to_coord(p, coord_tol) {
                        let mapped = SegCoord {
                            depth: half + c.depth.max(S::zero()).min(S::one()) * half,
                            side: c.side.max(S::zero()).min(S::one()),
                        };
                        return LocalDecision {
                            label: "wave",
                            tier: Some(WaveTier::New),
                            target: new_seg.from_coord(mapped),
                        };
                    }
                }
            }
        }
    }
    stay
}

/// True when robot `center` of the view is on the hull border of its own
/// `radius`-surrounding. Only meaningful if that whole surrounding is
/// inside the view.
fn certified_boundary<S: Scalar>(vis: &[Point<S>], center: usize, radius: S, tol: S) -> bool {
    let c = vis[center];
    let mut pts = Vec::new();
    let mut ci = 0;
    for (j, &q) in vis.iter().enumerate() {
        if c.dist(q) <= radius {
            if j == center {
                ci = pts.len();
            }
            pts.push(q);
        }
    }
    on_hull_border(&pts, ci, tol)
}

/// Cycle neighbors of a boundary robot, read off the hull border of its
/// unit surrounding: consecutive boundary robots are within unit distance
/// and no interior robot can separate them on the hull.
fn chain_neighbors<S: Scalar>(vis: &[Point<S>], center: usize, tol: S) -> Option<(usize, usize)> {
    let c = vis[center];
    let reach = S::one() + tol;
    let mut pts = Vec::new();
    let mut ids = Vec::new();
    let mut ci = None;
    for (j, &q) in vis.iter().enumerate() {
        if c.dist(q) <= reach {
            if j == center {
                ci = Some(pts.len());
            }
            pts.push(q);
            ids.push(j);
        }
    }
    let ci = ci?;
    let border = hull_border(&pts, tol);
    let m = border.len();
    if m < 3 {
        return None;
    }
    let pos = border.iter().position(|&b| b == ci)?;
    let prev = ids[border[(pos + m - 1) % m]];
    let next = ids[border[(pos + 1) % m]];
    if prev == next {
        return None;
    }
    Some((prev, next))
}

/// Boundary chain through `seed`, extended in both directions. Adjacency
/// is only computed at robots whose unit surrounding is fully visible
/// (within `range - 1` of the viewer); the final position on each side may
/// sit anywhere in the view. The flag is true when the walk met itself,
/// which makes the chain the entire boundary cycle.
fn walk_chain<S: Scalar>(
    vis: &[Point<S>],
    seed: usize,
    viewer: Point<S>,
    range: S,
    tol: S,
) -> (Vec<usize>, bool) {
    let Some((left, right)) = chain_neighbors(vis, seed, tol) else {
        return (vec![seed], false);
    };
    let adjacency_reach = range - S::one();
    let mut chain = VecDeque::new();
    let mut closed = false;
    chain.push_back(seed);
    for (start, forward) in [(right, true), (left, false)] {
        let mut prev = seed;
        let mut cur = start;
        loop {
            if chain.contains(&cur) {
                closed = true; // wrapped around the whole cycle
                break;
            }
            if forward {
                chain.push_back(cur);
            } else {
                chain.push_front(cur);
            }
            if viewer.dist(vis[cur]) > adjacency_reach {
                break;
            }
            let Some((a, b)) = chain_neighbors(vis, cur, tol) else {
                break;
            };
            let next = if a == prev {
                b
            } else if b == prev {
                a
            } else {
                break; // adjacency inconsistent with the walk so far
            };
            prev = cur;
            cur = next;
        }
    }
    (chain.into(), closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n_side: usize, spacing: f64) -> Configuration<f64> {
        let mut pts = Vec::new();
        for i in 0..n_side {
            for j in 0..n_side {
                pts.push((spacing * i as f64, spacing * j as f64));
            }
        }
        Configuration::from_pairs(&pts).unwrap()
    }

    #[test]
    fn local_matches_global_at_default_range() {
        let params = WaveParams::new(0.3).unwrap();
        let mut config = grid(6, 0.7);
        let mut saw_wave = false;
        for round in 0..40 {
            let report = verify_local_executability(&config, &params).unwrap();
            assert!(
                report.all_agree(),
                "round {}: first disagreement {:?}",
                round,
                report.disagreements.first()
            );
            saw_wave |= report.decisions.iter().any(|d| d.label == "wave");
            config = main_step(&config, &params).unwrap().next;
        }
        assert!(saw_wave, "the run must reach rounds with wave riders");
    }

    #[test]
    fn short_viewing_range_is_detected() {
        // Below the surround radius nothing is certifiable, so every robot
        // falls back to staying put and the moving robots get flagged.
        let params = WaveParams::new(0.3).unwrap().with_viewing_range(1.5);
        let config = grid(6, 0.7);
        let report = verify_local_executability(&config, &params).unwrap();
        assert!(!report.all_agree());
        for d in &report.disagreements {
            assert_eq!(d.local.label, "inner");
            assert_eq!(d.local.target, config[d.index]);
        }
        // Boundary robots all move, so all of them must be flagged.
        let flagged: Vec<usize> = report.disagreements.iter().map(|d| d.index).collect();
        let boundary = crate::geom::connectivity_boundary(&config, 1e-9).unwrap();
        for id in boundary.member_set() {
            assert!(flagged.contains(&id), "boundary robot {} not flagged", id);
        }
    }

    #[test]
    fn wave_rider_decides_like_the_global_step() {
        // Octagon ring with one robot dropped into the old ring.
        let m = 8;
        let mut pts: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                (1.3 * a.cos(), 1.3 * a.sin())
            })
            .collect();
        let params = WaveParams::new(0.25).unwrap().with_hole_check(None);
        let tier0: Vec<Point<f64>> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let regions = super::super::wave_regions(tier0, params.epsilon);
        let probe = regions.old_segments[5].from_coord(SegCoord {
            depth: 0.35,
            side: 0.7,
        });
        pts.push((probe.x, probe.y));
        let config = Configuration::from_pairs(&pts).unwrap();
        let report = verify_local_executability(&config, &params).unwrap();
        assert!(report.all_agree(), "{:?}", report.disagreements.first());
        assert_eq!(report.decisions[m].label, "wave");
        assert_eq!(report.decisions[m].tier, Some(WaveTier::Old));
    }
}
