//! Direct solvers sized for configuration Jacobians: dense LU with partial
//! pivoting, and a Sherman-Morrison wrapped Thomas solve for the symmetric
//! circulant tridiagonal systems of boundary averaging.

use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("dimension mismatch: matrix {n}x{n}, vector {len}")]
    Dimension { n: usize, len: usize },
}

/// Solves `a * x = b` in place: `a` is row-major `n` by `n` and is
/// overwritten with its LU factors, `b` with the solution.
pub fn lu_solve_in_place<S: Scalar>(
    a: &mut [S],
    n: usize,
    b: &mut [S],
) -> Result<(), LinalgError> {
    if a.len() != n * n || b.len() != n {
        return Err(LinalgError::Dimension { n, len: b.len() });
    }
    for col in 0..n {
        // Partial pivot.
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for row in (col + 1)..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag <= S::zero() {
            return Err(LinalgError::Singular);
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / pivot;
            if factor == S::zero() {
                continue;
            }
            a[row * n + col] = factor;
            for k in (col + 1)..n {
                let upper = a[col * n + k];
                a[row * n + k] -= factor * upper;
            }
            let rhs = b[col];
            b[row] -= factor * rhs;
        }
    }
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row * n + k] * b[k];
        }
        let pivot = a[row * n + row];
        if pivot.abs() <= S::zero() {
            return Err(LinalgError::Singular);
        }
        b[row] = acc / pivot;
    }
    Ok(())
}

/// Thomas algorithm for a tridiagonal system with constant off-diagonals
/// except at the two corners of the diagonal. Stable without pivoting when
/// strictly diagonally dominant, which the callers guarantee.
fn thomas_constant<S: Scalar>(
    off: S,
    diag_first: S,
    diag_mid: S,
    diag_last: S,
    rhs: &[S],
) -> Result<Vec<S>, LinalgError> {
    let n = rhs.len();
    let mut c_prime = vec![S::zero(); n];
    let mut x = rhs.to_vec();
    let diag_at = |i: usize| {
        if i == 0 {
            diag_first
        } else if i == n - 1 {
            diag_last
        } else {
            diag_mid
        }
    };
    let mut denom = diag_at(0);
    if denom.abs() <= S::zero() {
        return Err(LinalgError::Singular);
    }
    c_prime[0] = off / denom;
    x[0] = x[0] / denom;
    for i in 1..n {
        denom = diag_at(i) - off * c_prime[i - 1];
        if denom.abs() <= S::zero() {
            return Err(LinalgError::Singular);
        }
        c_prime[i] = off / denom;
        let prev = x[i - 1];
        x[i] = (x[i] - off * prev) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c_prime[i] * next;
    }
    Ok(x)
}

/// Solves the symmetric circulant tridiagonal system with diagonal `diag`
/// and off-diagonal `off` (wrapping at the corners) via Sherman-Morrison.
/// Requires strict diagonal dominance (`|diag| > 2|off|`).
pub fn solve_circulant_tridiagonal<S: Scalar>(
    off: S,
    diag: S,
    rhs: &[S],
) -> Result<Vec<S>, LinalgError> {
    let n = rhs.len();
    match n {
        0 => return Ok(Vec::new()),
        1 => {
            // Both wrap neighbors are the sole entry itself.
            let total = diag + off + off;
            if total.abs() <= S::zero() {
                return Err(LinalgError::Singular);
            }
            return Ok(vec![rhs[0] / total]);
        }
        2 => {
            // Wrap and direct neighbor coincide.
            let b = off + off;
            let det = diag * diag - b * b;
            if det.abs() <= S::zero() {
                return Err(LinalgError::Singular);
            }
            return Ok(vec![
                (diag * rhs[0] - b * rhs[1]) / det,
                (diag * rhs[1] - b * rhs[0]) / det,
            ]);
        }
        _ => {}
    }
    let gamma = -diag;
    // M = T + u v^T with u = (gamma, 0, .., off)^T, v = (1, 0, .., off/gamma)^T.
    let diag_first = diag - gamma;
    let diag_last = diag - off * off / gamma;
    let y = thomas_constant(off, diag_first, diag, diag_last, rhs)?;
    let mut u = vec![S::zero(); n];
    u[0] = gamma;
    u[n - 1] = off;
    let q = thomas_constant(off, diag_first, diag, diag_last, &u)?;
    let vy = y[0] + off / gamma * y[n - 1];
    let vq = q[0] + off / gamma * q[n - 1];
    let denom = S::one() + vq;
    if denom.abs() <= S::zero() {
        return Err(LinalgError::Singular);
    }
    let factor = vy / denom;
    Ok(y.iter().zip(&q).map(|(&yi, &qi)| yi - factor * qi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn lu_solves_random_systems() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 5, 17, 40] {
            let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x_true: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            // b = a * x_true
            let mut b = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    b[i] += a[i * n + j] * x_true[j];
                }
            }
            let mut a_work = a.clone();
            lu_solve_in_place(&mut a_work, n, &mut b).unwrap();
            for i in 0..n {
                assert!((b[i] - x_true[i]).abs() < 1e-9, "n={} i={}", n, i);
            }
        }
    }

    #[test]
    fn lu_rejects_singular() {
        // Second row is twice the first.
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 1.0];
        assert!(matches!(
            lu_solve_in_place(&mut a, 2, &mut b),
            Err(LinalgError::Singular)
        ));
    }

    #[test]
    fn circulant_matches_dense_lu() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for n in [1usize, 2, 3, 4, 7, 25, 128] {
            let eps = 0.37;
            let diag = 1.0 - eps;
            let off = eps / 2.0;
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fast = solve_circulant_tridiagonal(off, diag, &rhs).unwrap();
            // Dense reference.
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                a[i * n + i] += diag;
                a[i * n + (i + 1) % n] += off;
                a[i * n + (i + n - 1) % n] += off;
            }
            let mut b = rhs.clone();
            lu_solve_in_place(&mut a, n, &mut b).unwrap();
            for i in 0..n {
                assert!(
                    (fast[i] - b[i]).abs() < 1e-10,
                    "n={} i={} fast={} dense={}",
                    n,
                    i,
                    fast[i],
                    b[i]
                );
            }
        }
    }

    #[test]
    fn circulant_roundtrip_against_forward_multiply() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for n in [3usize, 5, 50, 200] {
            let eps = 0.49;
            let diag = 1.0 - eps;
            let off = eps / 2.0;
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let mut rhs = vec![0.0; n];
            for i in 0..n {
                rhs[i] = diag * x[i] + off * (x[(i + 1) % n] + x[(i + n - 1) % n]);
            }
            let back = solve_circulant_tridiagonal(off, diag, &rhs).unwrap();
            for i in 0..n {
                assert!((back[i] - x[i]).abs() < 1e-10);
            }
        }
    }
}
