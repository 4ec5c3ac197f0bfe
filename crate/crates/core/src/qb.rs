//! Randomized QB factorization and randomized DMD.

use crate::dmd::{fit_from_svd, split_lr, truncated_svd, DmdModel};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, thin_q};
use crate::seed::Stream;
use crate::snapshots::WindowView;
use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

/// Target rank `r`, oversampling `p`, power iterations `q` and the seed of
/// the Gaussian test matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QbConfig {
    pub target_rank: usize,
    pub oversample: usize,
    pub power_iters: usize,
    pub seed: u64,
}

impl QbConfig {
    pub fn new(target_rank: usize) -> Self {
        Self {
            target_rank,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rank(mut self, target_rank: usize) -> Self {
        self.target_rank = target_rank;
        self
    }
}

impl Default for QbConfig {
    fn default() -> Self {
        Self {
            target_rank: 1,
            oversample: 10,
            power_iters: 2,
            seed: 0,
        }
    }
}

/// `S ~ Q B` with `Q` orthonormal (`n x r`) and `B = Q^T S` (`r x cols`).
#[derive(Clone, Debug)]
pub struct QbFactor {
    pub q_basis: Mat<f64>,
    pub small: Mat<f64>,
    pub config: QbConfig,
}

/// `rows x cols` standard normal matrix, filled column by column.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Mat<f64> {
    let mut stream = Stream::new(seed);
    let values: Vec<f64> = (0..rows * cols).map(|_| stream.standard_normal()).collect();
    Mat::from_fn(rows, cols, |i, j| values[j * rows + i])
}

pub fn qb_decompose(s: MatRef<'_, f64>, config: &QbConfig) -> Result<QbFactor> {
    let (rows, cols) = s.shape();
    let r = config.target_rank;
    if cols == 0 {
        return Err(Error::Dimension("QB of a matrix without columns".into()));
    }
    if r == 0 || r > rows.min(cols) {
        return Err(Error::Parameter(format!(
            "target rank {r} outside 1..={}",
            rows.min(cols)
        )));
    }
    if max_abs(s) == 0.0 {
        return Err(Error::Degenerate("QB of a zero matrix has no range".into()));
    }
    let ell = (r + config.oversample).min(cols);
    let omega = gaussian_matrix(cols, ell, config.seed);
    let mut y = s * &omega;
    for _ in 0..config.power_iters {
        let q = thin_q(y.as_ref());
        let z = thin_q((s.transpose() * &q).as_ref());
        y = s * &z;
    }
    let q = thin_q(y.as_ref());
    let q_basis = q.subcols(0, r).to_owned();
    let small = q_basis.transpose() * s;
    Ok(QbFactor {
        q_basis,
        small,
        config: *config,
    })
}

/// DMD of the small factor `B`, lifted back through `Q`.
///
/// The reduced operator uses `k = min(r, cols - 1)` singular triplets of
/// `B_L`; the amplitudes are fitted to the first snapshot in the full space.
pub fn randomized_dmd(view: WindowView<'_>, config: &QbConfig, sv_floor: f64) -> Result<DmdModel> {
    if view.data.ncols() < 2 {
        return Err(Error::Dimension(format!(
            "DMD needs at least 2 columns, got {}",
            view.data.ncols()
        )));
    }
    let qb = qb_decompose(view.data, config)?;
    let pair = split_lr(qb.small.as_ref())?;
    let k = config.target_rank.min(pair.left.ncols());
    let svd = truncated_svd(pair.left, k, sv_floor)?;
    fit_from_svd(
        &svd,
        pair.right,
        Some(qb.q_basis.as_ref()),
        view.data.subcols(0, 1),
        view.grid,
        view.window,
    )
}
