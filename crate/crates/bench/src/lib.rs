//! Fixtures shared by the benchmarks in `benches/`.

use pdmd_core::faer::Mat;
use pdmd_core::qb::gaussian_matrix;
use pdmd_core::{Layout, SnapshotMatrix, TimeGrid};

/// Snapshots of `pairs` damped rotations embedded in `rows` dimensions by a
/// fixed Gaussian map: rank `2 * pairs`, coupled layout.
pub fn rotating_snapshots(rows: usize, cols: usize, pairs: usize) -> SnapshotMatrix {
    assert!(rows % 2 == 0);
    let embed = gaussian_matrix(rows, 2 * pairs, 1);
    let latent = Mat::from_fn(2 * pairs, cols, |i, k| {
        let p = i / 2;
        let omega = 0.02 + 0.037 * p as f64;
        let decay = (1.0 - 1e-4 * p as f64).powi(k as i32);
        let arg = omega * k as f64 + 0.3 * p as f64;
        decay * if i % 2 == 0 { arg.cos() } else { arg.sin() }
    });
    let data = &embed * &latent;
    let grid = TimeGrid::new(0.0, 1e-2, cols).expect("positive spacing");
    SnapshotMatrix::new(data, grid, Layout::Coupled(rows / 2)).expect("finite data")
}

/// Dense Gaussian matrix of exact rank `rank`.
pub fn low_rank(rows: usize, cols: usize, rank: usize) -> Mat<f64> {
    gaussian_matrix(rows, rank, 2) * gaussian_matrix(rank, cols, 3)
}
