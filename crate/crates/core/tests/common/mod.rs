#![allow(dead_code)]

use pdmd_core::faer::{c64, Mat};
use pdmd_core::seed::Stream;
use pdmd_core::{SnapshotMatrix, TimeGrid};

pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Mat<f64> {
    pdmd_core::qb::gaussian_matrix(rows, cols, seed)
}

pub fn orthogonal(n: usize, seed: u64) -> Mat<f64> {
    pdmd_core::linalg::thin_q(gaussian(n, n, seed).as_ref())
}

/// `[x_0, A x_0, .., A^m x_0]`.
pub fn orbit(a: &Mat<f64>, x0: &[f64], m: usize) -> Mat<f64> {
    let n = x0.len();
    let mut s = Mat::<f64>::zeros(n, m + 1);
    for i in 0..n {
        s[(i, 0)] = x0[i];
    }
    for k in 1..=m {
        let prev = s.col(k - 1).to_owned();
        let next = a * &prev;
        for i in 0..n {
            s[(i, k)] = next[i];
        }
    }
    s
}

pub fn snapshots(data: Mat<f64>) -> SnapshotMatrix {
    SnapshotMatrix::from_columns(data).unwrap()
}

pub fn with_grid(data: Mat<f64>, dt: f64) -> SnapshotMatrix {
    let cols = data.ncols();
    let rows = data.nrows();
    SnapshotMatrix::new(data, TimeGrid::new(0.0, dt, cols).unwrap(), pdmd_core::Layout::Single(rows)).unwrap()
}

/// Real normal matrix `P D P^T` with `D` built from conjugate pairs
/// `rho e^{+-i theta}`; returns the matrix and its eigenvalues.
pub fn rotation_system(pairs: &[(f64, f64)], seed: u64) -> (Mat<f64>, Vec<c64>) {
    let n = 2 * pairs.len();
    let mut d = Mat::<f64>::zeros(n, n);
    let mut eig = Vec::new();
    for (b, &(rho, theta)) in pairs.iter().enumerate() {
        let (c, s) = (rho * theta.cos(), rho * theta.sin());
        d[(2 * b, 2 * b)] = c;
        d[(2 * b, 2 * b + 1)] = -s;
        d[(2 * b + 1, 2 * b)] = s;
        d[(2 * b + 1, 2 * b + 1)] = c;
        eig.push(c64::new(c, s));
        eig.push(c64::new(c, -s));
    }
    let p = orthogonal(n, seed);
    (&p * &d * p.transpose(), eig)
}

/// Ten conjugate pairs with distinct moduli in `[0.82, 1]` and spread angles.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(f64, f64)> {
    let mut s = Stream::new(seed);
    (0..count)
        .map(|i| {
            let rho = 1.0 - 0.18 * (i as f64 + 0.5 * s.uniform()) / count as f64;
            let theta = std::f64::consts::PI * (i as f64 + 0.2 + 0.6 * s.uniform()) / count as f64;
            (rho, theta)
        })
        .collect()
}

/// Distance from each expected eigenvalue to the closest computed one.
pub fn spectrum_distance(expected: &[c64], got: &[c64]) -> f64 {
    expected
        .iter()
        .map(|e| got.iter().map(|g| (g - e).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut m = 0.0_f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    m
}
