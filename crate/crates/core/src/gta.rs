//! Smoothed go-to-the-average dynamics.
//!
//! Each robot moves an `epsilon` fraction toward a bump-weighted average of
//! its neighbors. The weight of a neighbor at squared distance `X` is
//! `exp(-X^2 / (1 - X^2))`, which fades smoothly to zero exactly at unit
//! distance, so the rule only reads positions inside the viewing range and
//! the map is smooth in every coordinate.
//!
//! The module also exposes the exact Jacobian of one step, a Gershgorin
//! certificate of its invertibility, and Newton inversion of a step, which
//! together witness that the dynamics are a diffeomorphism for small
//! `epsilon` and therefore preserve every rotational symmetry.

use crate::geom::{Configuration, GeometryError, Point};
use crate::linalg::{lu_solve_in_place, LinalgError};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum GtaError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("bump weight expects a nonnegative squared distance, got {x}")]
    NegativeInput { x: f64 },
    #[error("epsilon must be finite and positive, got {eps}")]
    InvalidEpsilon { eps: f64 },
    #[error("step size bound needs at least two robots, got {n}")]
    TooFewRobots { n: usize },
    #[error("Newton inversion stalled at residual {residual} after {iterations} iterations")]
    NotConverged { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct GtaParams<S> {
    pub epsilon: S,
}

impl<S: Scalar> GtaParams<S> {
    pub fn new(epsilon: S) -> Result<Self, GtaError> {
        if !epsilon.is_finite() || epsilon <= S::zero() {
            return Err(GtaError::InvalidEpsilon {
                eps: epsilon.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(GtaParams { epsilon })
    }
}

/// Neighbor weight for squared distance `x`: smooth, 1 at zero distance,
/// identically 0 from unit distance outward.
pub fn bump<S: Scalar>(x: S) -> Result<S, GtaError> {
    if x < S::zero() {
        return Err(GtaError::NegativeInput {
            x: x.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(bump_unchecked(x))
}

fn bump_unchecked<S: Scalar>(x: S) -> S {
    if x >= S::one() {
        return S::zero();
    }
    let denom = S::one() - x * x;
    (-(x * x) / denom).exp()
}

/// Derivative of [`bump`] with respect to the squared distance.
pub fn bump_deriv<S: Scalar>(x: S) -> Result<S, GtaError> {
    if x < S::zero() {
        return Err(GtaError::NegativeInput {
            x: x.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(bump_deriv_unchecked(x))
}

fn bump_deriv_unchecked<S: Scalar>(x: S) -> S {
    if x >= S::one() {
        return S::zero();
    }
    let denom = S::one() - x * x;
    let two = S::lit(2.0);
    -(two * x) / (denom * denom) * bump_unchecked(x)
}

/// Bump-weighted average displacement of robot `i`: the vector the robot
/// scales by `epsilon` and adds to its position. Kahan-compensated in
/// ascending neighbor order so results are identical across runs and
/// thread counts.
pub fn target_displacement<S: Scalar>(positions: &[Point<S>], i: usize) -> Point<S> {
    let n = S::of_usize(positions.len());
    let zi = positions[i];
    let mut sum = Point::zero();
    let mut comp = Point::zero();
    for (j, &zj) in positions.iter().enumerate() {
        if j == i {
            continue;
        }
        let w = bump_unchecked(zi.dist_sq(zj));
        let term = (zj - zi) * w;
        // Kahan update, per coordinate.
        let tx = term.x - comp.x;
        let ty = term.y - comp.y;
        let sx = sum.x + tx;
        let sy = sum.y + ty;
        comp.x = (sx - sum.x) - tx;
        comp.y = (sy - sum.y) - ty;
        sum.x = sx;
        sum.y = sy;
    }
    sum / n
}

/// One synchronous round: every robot moves `epsilon` times its target
/// displacement.
pub fn step<S: Scalar>(
    config: &Configuration<S>,
    params: &GtaParams<S>,
) -> Result<Configuration<S>, GtaError> {
    step_with_threads(config, params, 1)
}

/// Same as [`step`], splitting robots across `threads` workers. Each
/// robot's sum is evaluated in the same order regardless of the split, so
/// the result is bit-identical to the single-threaded step.
pub fn step_with_threads<S: Scalar>(
    config: &Configuration<S>,
    params: &GtaParams<S>,
    threads: usize,
) -> Result<Configuration<S>, GtaError> {
    let positions = config.positions();
    let n = positions.len();
    let eps = params.epsilon;
    let threads = threads.max(1).min(n.max(1));
    let moved: Vec<Point<S>> = if threads == 1 {
        (0..n)
            .map(|i| positions[i] + target_displacement(positions, i) * eps)
            .collect()
    } else {
        let chunk = n.div_ceil(threads);
        let mut out: Vec<Point<S>> = vec![Point::zero(); n];
        std::thread::scope(|scope| {
            let mut rest = out.as_mut_slice();
            let mut start = 0;
            while start < n {
                let take = chunk.min(n - start);
                let (head, tail) = rest.split_at_mut(take);
                rest = tail;
                let base = start;
                scope.spawn(move || {
                    for (k, slot) in head.iter_mut().enumerate() {
                        let i = base + k;
                        *slot = positions[i] + target_displacement(positions, i) * eps;
                    }
                });
                start += take;
            }
        });
        out
    };
    Configuration::new(moved).map_err(GtaError::Geometry)
}

/// Dense Jacobian of one step, row-major over interleaved coordinates
/// `(x_0, y_0, x_1, y_1, ...)`.
#[derive(Debug, Clone)]
pub struct Jacobian<S> {
    pub robots: usize,
    data: Vec<S>,
}

impl<S: Scalar> Jacobian<S> {
    pub fn dim(&self) -> usize {
        2 * self.robots
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.data[row * self.dim() + col]
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }
}

/// Exact Jacobian of [`step`] at `config`.
pub fn jacobian<S: Scalar>(config: &Configuration<S>, params: &GtaParams<S>) -> Jacobian<S> {
    let positions = config.positions();
    let n = positions.len();
    let dim = 2 * n;
    let scale = params.epsilon / S::of_usize(n);
    let two = S::lit(2.0);
    let mut data = vec![S::zero(); dim * dim];
    for i in 0..n {
        let zi = positions[i];
        // Accumulated diagonal contributions.
        let mut sum_xx = S::zero();
        let mut sum_yy = S::zero();
        let mut sum_xy = S::zero();
        for (j, &zj) in positions.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = zj - zi;
            let x = d.norm_sq();
            let b = bump_unchecked(x);
            let bp = bump_deriv_unchecked(x);
            let gxx = two * bp * d.x * d.x + b;
            let gyy = two * bp * d.y * d.y + b;
            let gxy = two * bp * d.x * d.y;
            data[(2 * i) * dim + 2 * j] = scale * gxx;
            data[(2 * i) * dim + 2 * j + 1] = scale * gxy;
            data[(2 * i + 1) * dim + 2 * j] = scale * gxy;
            data[(2 * i + 1) * dim + 2 * j + 1] = scale * gyy;
            sum_xx += gxx;
            sum_yy += gyy;
            sum_xy += gxy;
        }
        data[(2 * i) * dim + 2 * i] = S::one() - scale * sum_xx;
        data[(2 * i) * dim + 2 * i + 1] = -scale * sum_xy;
        data[(2 * i + 1) * dim + 2 * i] = -scale * sum_xy;
        data[(2 * i + 1) * dim + 2 * i + 1] = S::one() - scale * sum_yy;
    }
    Jacobian { robots: n, data }
}

/// Row-wise invertibility certificate: every Gershgorin disc excludes the
/// origin, so the Jacobian is nonsingular and the step is locally (hence,
/// for this dynamics, globally) injective.
#[derive(Debug, Clone)]
pub struct GershgorinCertificate<S> {
    pub certified: bool,
    /// Smallest |diagonal| - (off-diagonal row sum) over all rows.
    pub min_gap: S,
    pub worst_row: usize,
}

pub fn gershgorin_certify<S: Scalar>(jac: &Jacobian<S>) -> GershgorinCertificate<S> {
    let dim = jac.dim();
    let mut min_gap = S::infinity();
    let mut worst_row = 0;
    for r in 0..dim {
        let mut radius = S::zero();
        for c in 0..dim {
            if c != r {
                radius += jac.get(r, c).abs();
            }
        }
        let gap = jac.get(r, r).abs() - radius;
        if gap < min_gap {
            min_gap = gap;
            worst_row = r;
        }
    }
    GershgorinCertificate {
        certified: min_gap > S::zero(),
        min_gap,
        worst_row,
    }
}

/// Step size below which the Gershgorin certificate holds for every
/// configuration of `n` robots.
pub fn epsilon_bound<S: Scalar>(n: usize) -> Result<S, GtaError> {
    if n < 2 {
        return Err(GtaError::TooFewRobots { n });
    }
    Ok(S::of_usize(n) / (S::lit(27.0) * S::of_usize(n - 1)))
}

/// Reconstructs the configuration whose step lands on `after`, by Newton
/// iteration on the full coordinate vector. Converges for certified step
/// sizes; starts from `after` itself.
pub fn invert_step<S: Scalar>(
    after: &Configuration<S>,
    params: &GtaParams<S>,
    tol: S,
    max_iter: usize,
) -> Result<Configuration<S>, GtaError> {
    let n = after.len();
    let dim = 2 * n;
    let mut guess = after.clone();
    let mut residual = S::infinity();
    for _ in 0..max_iter {
        let forward = step(&guess, params)?;
        let mut rhs = vec![S::zero(); dim];
        residual = S::zero();
        for i in 0..n {
            let r = forward[i] - after[i];
            rhs[2 * i] = r.x;
            rhs[2 * i + 1] = r.y;
            residual = residual.max(r.x.abs()).max(r.y.abs());
        }
        if residual <= tol {
            return Ok(guess);
        }
        let jac = jacobian(&guess, params);
        let mut a = jac.data;
        lu_solve_in_place(&mut a, dim, &mut rhs)?;
        let corrected: Vec<Point<S>> = (0..n)
            .map(|i| guess[i] - Point::new(rhs[2 * i], rhs[2 * i + 1]))
            .collect();
        guess = Configuration::new(corrected)?;
    }
    // One final residual check to accept late convergence.
    let forward = step(&guess, params)?;
    let mut worst = S::zero();
    for i in 0..n {
        worst = worst.max(forward[i].dist(after[i]));
    }
    if worst <= tol {
        return Ok(guess);
    }
    Err(GtaError::NotConverged {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_config(rng: &mut impl Rng, n: usize, span: f64) -> Configuration<f64> {
        Configuration::new(
            (0..n)
                .map(|_| {
                    crate::geom::Point::new(rng.gen_range(-span..span), rng.gen_range(-span..span))
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bump_matches_closed_forms() {
        assert_eq!(bump(0.0).unwrap(), 1.0);
        assert_eq!(bump(1.0).unwrap(), 0.0);
        assert_eq!(bump(2.5).unwrap(), 0.0);
        // exp(-X^2/(1-X^2)) at X = 1/4 is exp(-1/15).
        let b = bump(0.25).unwrap();
        assert!((b - (-1.0f64 / 15.0).exp()).abs() < 1e-15);
        assert!(matches!(bump(-0.1), Err(GtaError::NegativeInput { .. })));
    }

    #[test]
    fn bump_is_continuous_and_deriv_matches_finite_differences() {
        let h = 1e-7;
        for k in 0..99 {
            let x = 0.01 * (k as f64) + 0.005;
            let fd = (bump(x + h).unwrap() - bump(x - h).unwrap()) / (2.0 * h);
            let an = bump_deriv(x).unwrap();
            assert!(
                (fd - an).abs() < 1e-6 * (1.0 + an.abs()),
                "x={} fd={} an={}",
                x,
                fd,
                an
            );
        }
        // Smooth cutoff: values and slopes vanish at the range boundary.
        assert!(bump(0.999999).unwrap() < 1e-200);
        assert_eq!(bump_deriv(1.0).unwrap(), 0.0);
    }

    #[test]
    fn two_robot_step_matches_hand_computation() {
        let cfg = Configuration::from_pairs(&[(0.0, 0.0), (0.5, 0.0)]).unwrap();
        let params = GtaParams::new(0.05).unwrap();
        let next = step(&cfg, &params).unwrap();
        // displacement = eps * (1/2) * bump(0.25) * 0.5 = 0.0125 * exp(-1/15)
        let expect = 0.0125 * (-1.0f64 / 15.0).exp();
        assert!((next[0].x - expect).abs() < 1e-15);
        assert!((next[1].x - (0.5 - expect)).abs() < 1e-15);
        assert_eq!(next[0].y, 0.0);
        // Robots beyond unit distance ignore each other entirely.
        let far = Configuration::from_pairs(&[(0.0, 0.0), (1.5, 0.0)]).unwrap();
        let same = step(&far, &params).unwrap();
        assert_eq!(same[0], far[0]);
        assert_eq!(same[1], far[1]);
    }

    #[test]
    fn threaded_step_is_bit_identical() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let cfg = random_config(&mut rng, 57, 2.0);
        let params = GtaParams::new(0.03).unwrap();
        let single = step(&cfg, &params).unwrap();
        for threads in [2, 3, 8, 64] {
            let multi = step_with_threads(&cfg, &params, threads).unwrap();
            for i in 0..cfg.len() {
                assert_eq!(single[i], multi[i], "threads={} robot {}", threads, i);
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for trial in 0..12 {
            let n = 2 + trial % 7;
            let cfg = random_config(&mut rng, n, 1.2);
            let params = GtaParams::new(0.04).unwrap();
            let jac = jacobian(&cfg, &params);
            let dim = 2 * n;
            let h = 1e-6;
            for col in 0..dim {
                let mut plus = cfg.positions().to_vec();
                let mut minus = cfg.positions().to_vec();
                if col % 2 == 0 {
                    plus[col / 2].x += h;
                    minus[col / 2].x -= h;
                } else {
                    plus[col / 2].y += h;
                    minus[col / 2].y -= h;
                }
                let fp = step(&Configuration::new(plus).unwrap(), &params).unwrap();
                let fm = step(&Configuration::new(minus).unwrap(), &params).unwrap();
                for row in 0..dim {
                    let (p, m) = if row % 2 == 0 {
                        (fp[row / 2].x, fm[row / 2].x)
                    } else {
                        (fp[row / 2].y, fm[row / 2].y)
                    };
                    let fd = (p - m) / (2.0 * h);
                    let an = jac.get(row, col);
                    assert!(
                        (fd - an).abs() < 1e-5,
                        "trial {} row {} col {}: fd {} analytic {}",
                        trial,
                        row,
                        col,
                        fd,
                        an
                    );
                }
            }
        }
    }

    #[test]
    fn jacobian_rows_sum_to_one_by_translation_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let cfg = random_config(&mut rng, 9, 1.0);
        let params = GtaParams::new(0.02).unwrap();
        let jac = jacobian(&cfg, &params);
        let dim = jac.dim();
        for row in 0..dim {
            // Sum over matching-coordinate columns equals 1, the other
            // coordinate's columns cancel to 0.
            let mut same = 0.0;
            let mut cross = 0.0;
            for col in 0..dim {
                if col % 2 == row % 2 {
                    same += jac.get(row, col);
                } else {
                    cross += jac.get(row, col);
                }
            }
            assert!((same - 1.0).abs() < 1e-12, "row {}", row);
            assert!(cross.abs() < 1e-12, "row {}", row);
        }
    }

    #[test]
    fn certificate_holds_below_bound_and_fails_when_pushed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for trial in 0..20 {
            let n = 2 + trial % 9;
            let cfg = random_config(&mut rng, n, 1.0);
            let eps = 0.9 * epsilon_bound::<f64>(n).unwrap();
            let params = GtaParams::new(eps).unwrap();
            let cert = gershgorin_certify(&jacobian(&cfg, &params));
            assert!(cert.certified, "trial {} gap {}", trial, cert.min_gap);
        }
        // A diagonal pair at squared distance 0.7 with a large step loses
        // the certificate.
        let d = 0.7f64.sqrt() / 2.0f64.sqrt();
        let cfg = Configuration::from_pairs(&[(0.0, 0.0), (d, d)]).unwrap();
        let params = GtaParams::new(1.0).unwrap();
        let cert = gershgorin_certify(&jacobian(&cfg, &params));
        assert!(!cert.certified);
        assert!(cert.min_gap < 0.0);
    }

    #[test]
    fn epsilon_bound_values() {
        assert!(matches!(
            epsilon_bound::<f64>(1),
            Err(GtaError::TooFewRobots { n: 1 })
        ));
        assert!((epsilon_bound::<f64>(2).unwrap() - 2.0 / 27.0).abs() < 1e-15);
        // Decreasing in n, approaching 1/27.
        let b5 = epsilon_bound::<f64>(5).unwrap();
        let b50 = epsilon_bound::<f64>(50).unwrap();
        assert!(b5 > b50 && b50 > 1.0 / 27.0);
    }

    #[test]
    fn newton_inverts_certified_steps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for trial in 0..10 {
            let n = 2 + trial;
            let cfg = random_config(&mut rng, n, 1.0);
            let eps = 0.9 * epsilon_bound::<f64>(n).unwrap();
            let params = GtaParams::new(eps).unwrap();
            let after = step(&cfg, &params).unwrap();
            let back = invert_step(&after, &params, 1e-12, 50).unwrap();
            for i in 0..n {
                assert!(
                    back[i].dist(cfg[i]) < 1e-9,
                    "trial {} robot {} err {}",
                    trial,
                    i,
                    back[i].dist(cfg[i])
                );
            }
        }
    }

    #[test]
    fn step_commutes_with_rotation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let cfg = random_config(&mut rng, 8, 1.0);
        let params = GtaParams::new(0.03).unwrap();
        let angle = 1.234;
        let rotated = Configuration::new(
            cfg.positions().iter().map(|p| p.rotated(angle)).collect(),
        )
        .unwrap();
        let a = step(&rotated, &params).unwrap();
        let b = step(&cfg, &params).unwrap();
        for i in 0..cfg.len() {
            assert!(a[i].dist(b[i].rotated(angle)) < 1e-12);
        }
    }
}
