//! Small dense helpers on top of faer.

use crate::error::{Error, Result};
use faer::{c64, Col, Mat, MatRef};

/// Singular values below this are treated as zero: `max(rows, cols) * eps * sigma_1`.
pub fn rank_tolerance(rows: usize, cols: usize, sigma_1: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_1
}

pub fn singular_values(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    m.singular_values()
        .map_err(|e| Error::Nonfinite(format!("singular value iteration failed: {e:?}")))
}

/// Number of singular values above [`rank_tolerance`].
pub fn numerical_rank(m: MatRef<'_, f64>) -> Result<usize> {
    let sv = singular_values(m)?;
    let Some(&s1) = sv.first() else {
        return Ok(0);
    };
    if s1 == 0.0 {
        return Ok(0);
    }
    let tol = rank_tolerance(m.nrows(), m.ncols(), s1);
    Ok(sv.iter().take_while(|&&s| s > tol).count())
}

/// Orthonormal basis from the thin QR factorization of `y`.
pub fn thin_q(y: MatRef<'_, f64>) -> Mat<f64> {
    y.qr().compute_thin_Q()
}

/// Minimum-norm least-squares solution of `a x = b`, singular values below
/// [`rank_tolerance`] are discarded.
pub fn lstsq_complex(a: MatRef<'_, c64>, b: &[c64]) -> Result<Vec<c64>> {
    if a.nrows() != b.len() {
        return Err(Error::Dimension(format!(
            "least squares with {} rows but a right-hand side of {}",
            a.nrows(),
            b.len()
        )));
    }
    let svd = a
        .thin_svd()
        .map_err(|e| Error::Nonfinite(format!("complex SVD failed: {e:?}")))?;
    let s = svd.S().column_vector();
    let k = s.nrows();
    if k == 0 {
        return Ok(vec![c64::new(0.0, 0.0); a.ncols()]);
    }
    let s1 = s[0].re;
    let tol = rank_tolerance(a.nrows(), a.ncols(), s1);
    let rhs = Col::<c64>::from_fn(b.len(), |i| b[i]);
    let mut coef = svd.U().adjoint() * &rhs;
    for i in 0..k {
        let si = s[i].re;
        coef[i] = if si > tol && s1 > 0.0 {
            coef[i] * (1.0 / si)
        } else {
            c64::new(0.0, 0.0)
        };
    }
    let x = svd.V() * &coef;
    Ok(x.iter().copied().collect())
}

/// Parlett-Reinsch balancing with radix 2: scales `a` in place to
/// `D^-1 a D` with row and column norms of similar size and returns the
/// diagonal of `D`. Eigenvectors of the original matrix are `D` times those
/// of the balanced one.
pub fn balance(a: &mut Mat<f64>) -> Vec<f64> {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut d = vec![1.0; n];
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 || !c.is_finite() || !r.is_finite() {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return d;
        }
    }
}

/// Largest absolute entry.
pub fn max_abs(m: MatRef<'_, f64>) -> f64 {
    m.col_iter()
        .flat_map(|c| c.iter().copied())
        .fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub(crate) fn all_finite(m: MatRef<'_, f64>) -> bool {
    m.col_iter().all(|c| c.iter().all(|x| x.is_finite()))
}

pub(crate) fn all_finite_c(m: MatRef<'_, c64>) -> bool {
    m.col_iter()
        .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
}
