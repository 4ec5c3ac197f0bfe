//! Node-centered finite-difference Laplacians with Neumann closure.
//!
//! The grid has `n` nodes `x_i = i h`, boundary nodes included. The normal
//! derivative condition is imposed with a mirrored ghost node, which gives
//! the boundary rows `[-2, 2] / h^2`.

use crate::error::{Error, Result};
use faer::Mat;

/// Dense `n x n` Neumann Laplacian.
pub fn neumann_laplacian_1d(n: usize, h: f64) -> Result<Mat<f64>> {
    check(n, h)?;
    let s = 1.0 / (h * h);
    let mut l = Mat::<f64>::zeros(n, n);
    l[(0, 0)] = -2.0 * s;
    l[(0, 1)] = 2.0 * s;
    for i in 1..n - 1 {
        l[(i, i - 1)] = s;
        l[(i, i)] = -2.0 * s;
        l[(i, i + 1)] = s;
    }
    l[(n - 1, n - 2)] = 2.0 * s;
    l[(n - 1, n - 1)] = -2.0 * s;
    Ok(l)
}

fn check(n: usize, h: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::Parameter(format!("Laplacian needs n >= 3, got {n}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Parameter(format!("grid spacing must be > 0, got {h}")));
    }
    Ok(())
}

/// Closed-form eigendecomposition `L = P diag(eigvals) P^-1`.
///
/// Column `j` of `P` is `cos(pi i j / (n - 1))` with eigenvalue
/// `-(2 / h^2)(1 - cos(pi j / (n - 1)))`. The inverse is
/// `diag(1 / ((n - 1) c_j / 2)) P^T W` with `W = diag(1/2, 1, .., 1, 1/2)`,
/// `c_0 = c_{n-1} = 2` and `c_j = 1` otherwise.
#[derive(Clone, Debug)]
pub struct NeumannSpectrum {
    pub eigvals: Vec<f64>,
    pub vectors: Mat<f64>,
    pub inverse: Mat<f64>,
}

pub fn neumann_spectrum(n: usize, h: f64) -> Result<NeumannSpectrum> {
    check(n, h)?;
    let last = (n - 1) as f64;
    let pi = std::f64::consts::PI;
    let eigvals = (0..n)
        .map(|j| {
            let s = (pi * j as f64 / (2.0 * last)).sin();
            -4.0 * s * s / (h * h)
        })
        .collect();
    let vectors = Mat::from_fn(n, n, |i, j| cos_node(i, j, n));
    let inverse = Mat::from_fn(n, n, |j, i| {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let c = if j == 0 || j == n - 1 { 2.0 } else { 1.0 };
        w * cos_node(i, j, n) / (0.5 * last * c)
    });
    Ok(NeumannSpectrum {
        eigvals,
        vectors,
        inverse,
    })
}

/// `cos(pi i j / (n - 1))` with the angle reduced exactly modulo `2 (n - 1)`.
fn cos_node(i: usize, j: usize, n: usize) -> f64 {
    let period = 2 * (n - 1);
    let r = (i * j) % period;
    (std::f64::consts::PI * r as f64 / (n - 1) as f64).cos()
}

/// Pre-factored tridiagonal system `(I - a L) x = rhs` for the 1D Laplacian.
#[derive(Clone, Debug)]
pub struct ImplicitTridiag {
    sub: Vec<f64>,
    sup_mod: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl ImplicitTridiag {
    /// Factor `I - a L` where `L` is [`neumann_laplacian_1d`]`(n, h)`.
    pub fn new(n: usize, h: f64, a: f64) -> Result<Self> {
        check(n, h)?;
        let s = a / (h * h);
        let diag = vec![1.0 + 2.0 * s; n];
        let mut sub = vec![-s; n];
        let mut sup = vec![-s; n];
        sub[0] = 0.0;
        sup[n - 1] = 0.0;
        sup[0] = -2.0 * s;
        sub[n - 1] = -2.0 * s;
        let mut sup_mod = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            let pivot = diag[i] - sub[i] * prev;
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::Degenerate("singular implicit diffusion matrix".into()));
            }
            inv_pivot[i] = 1.0 / pivot;
            sup_mod[i] = sup[i] * inv_pivot[i];
            prev = sup_mod[i];
        }
        Ok(Self {
            sub,
            sup_mod,
            inv_pivot,
        })
    }

    /// Solve in place.
    pub fn solve(&self, x: &mut [f64]) {
        let n = x.len();
        let mut prev = 0.0;
        for i in 0..n {
            let y = (x[i] - self.sub[i] * prev) * self.inv_pivot[i];
            x[i] = y;
            prev = y;
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.sup_mod[i] * x[i + 1];
        }
    }
}
