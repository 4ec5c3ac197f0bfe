//! Exact dynamic mode decomposition and reconstruction.

use crate::error::{Error, Result};
use crate::linalg::{all_finite, all_finite_c, balance, lstsq_complex};
use crate::snapshots::{ColumnWindow, TimeGrid, WindowView};
use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// `S_L` (columns `0..m`) and `S_R` (columns `1..=m`) of a window.
#[derive(Clone, Copy, Debug)]
pub struct SplitPair<'a> {
    pub left: MatRef<'a, f64>,
    pub right: MatRef<'a, f64>,
}

pub fn split_lr(data: MatRef<'_, f64>) -> Result<SplitPair<'_>> {
    let cols = data.ncols();
    if cols < 2 {
        return Err(Error::Dimension(format!(
            "splitting needs at least 2 columns, got {cols}"
        )));
    }
    Ok(SplitPair {
        left: data.subcols(0, cols - 1),
        right: data.subcols(1, cols - 1),
    })
}

/// Leading singular triplets `Psi_r`, `Sigma_r`, `V_r`.
#[derive(Clone, Debug)]
pub struct TruncatedSvd {
    pub modes_left: Mat<f64>,
    pub singular: Vec<f64>,
    pub modes_right: Mat<f64>,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.singular.len()
    }
}

/// Rank-`r` SVD of `m`. With `sv_floor > 0` trailing values with
/// `sigma_i / sigma_1 < sv_floor` are also dropped.
pub fn truncated_svd(m: MatRef<'_, f64>, r: usize, sv_floor: f64) -> Result<TruncatedSvd> {
    let max_r = m.nrows().min(m.ncols());
    if r == 0 || r > max_r {
        return Err(Error::Parameter(format!(
            "target rank {r} outside 1..={max_r}"
        )));
    }
    if !(sv_floor >= 0.0) {
        return Err(Error::Parameter(format!("sv_floor must be >= 0, got {sv_floor}")));
    }
    if !all_finite(m) {
        return Err(Error::Nonfinite("SVD input has nonfinite entries".into()));
    }
    let svd = m
        .thin_svd()
        .map_err(|e| Error::Nonfinite(format!("SVD failed: {e:?}")))?;
    let s = svd.S().column_vector();
    let s1 = s[0];
    if s1 == 0.0 {
        return Err(Error::Degenerate("all singular values are zero".into()));
    }
    let mut keep = r;
    if sv_floor > 0.0 {
        keep = (0..r).take_while(|&i| s[i] / s1 >= sv_floor).count().max(1);
    }
    Ok(TruncatedSvd {
        modes_left: svd.U().subcols(0, keep).to_owned(),
        singular: (0..keep).map(|i| s[i]).collect(),
        modes_right: svd.V().subcols(0, keep).to_owned(),
    })
}

/// Spectral surrogate `x_k ~ Re(Phi Lambda^k b)` of a snapshot window.
#[derive(Clone, Debug)]
pub struct DmdModel {
    pub modes: Mat<c64>,
    pub eigvals: Vec<c64>,
    pub amps: Vec<c64>,
    pub rank: usize,
    pub grid: TimeGrid,
    pub window: ColumnWindow,
    /// `||Phi b - x_0|| / ||x_0||` (absolute when `x_0 = 0`).
    pub fit_residual: f64,
}

/// `z^k` through the modulus-argument form.
pub fn complex_power(z: c64, k: usize) -> c64 {
    if k == 0 {
        return c64::new(1.0, 0.0);
    }
    let modulus = z.norm();
    if modulus == 0.0 {
        return c64::new(0.0, 0.0);
    }
    let kf = k as f64;
    let scale = (kf * modulus.ln()).exp();
    let angle = kf * z.im.atan2(z.re);
    c64::new(scale * angle.cos(), scale * angle.sin())
}

impl DmdModel {
    /// Coefficients `lambda_i^k b_i` of snapshot `k` in the mode basis.
    pub fn coefficients(&self, k: usize) -> Result<Vec<c64>> {
        self.eigvals
            .iter()
            .zip(self.amps.iter())
            .map(|(&lam, &b)| {
                let p = complex_power(lam, k);
                let c = p * b;
                if p.re.is_finite() && p.im.is_finite() && c.re.is_finite() && c.im.is_finite() {
                    Ok(c)
                } else {
                    Err(Error::PowerOverflow {
                        re: lam.re,
                        im: lam.im,
                        k,
                    })
                }
            })
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.modes.nrows()
    }
}

/// Real part of a reconstruction and the largest discarded imaginary part.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub data: Mat<f64>,
    pub max_imag: f64,
}

const BLOCK: usize = 256;

/// Visit the reconstruction of columns `range` in blocks of at most
/// `block` columns; `visit` receives the absolute start column of each block.
/// Returns the largest imaginary part seen.
pub fn for_each_block(
    model: &DmdModel,
    range: Range<usize>,
    block: usize,
    mut visit: impl FnMut(usize, MatRef<'_, f64>) -> Result<()>,
) -> Result<f64> {
    if range.end > model.grid.count || range.start > range.end {
        return Err(Error::Dimension(format!(
            "range {range:?} outside the fitted window of {} snapshots",
            model.grid.count
        )));
    }
    let r = model.eigvals.len();
    let block = block.max(1);
    let mut max_imag = 0.0_f64;
    let mut start = range.start;
    while start < range.end {
        let len = block.min(range.end - start);
        let mut coef = Mat::<c64>::zeros(r, len);
        for j in 0..len {
            let c = model.coefficients(start + j)?;
            for i in 0..r {
                coef[(i, j)] = c[i];
            }
        }
        let z = &model.modes * &coef;
        let re = Mat::from_fn(z.nrows(), len, |i, j| z[(i, j)].re);
        for j in 0..len {
            for i in 0..z.nrows() {
                max_imag = max_imag.max(z[(i, j)].im.abs());
            }
        }
        if !all_finite(re.as_ref()) {
            return Err(Error::Nonfinite(format!(
                "reconstruction of columns {start}..{}",
                start + len
            )));
        }
        visit(start, re.as_ref())?;
        start += len;
    }
    Ok(max_imag)
}

/// Columns `range` of `Re(Phi Lambda^k b)`, indices relative to the window start.
pub fn reconstruct(model: &DmdModel, range: Range<usize>) -> Result<Reconstruction> {
    let offset = range.start;
    let mut data = Mat::<f64>::zeros(model.nrows(), range.end.saturating_sub(range.start));
    let max_imag = for_each_block(model, range, BLOCK, |start, block| {
        data.subcols_mut(start - offset, block.ncols()).copy_from(block);
        Ok(())
    })?;
    Ok(Reconstruction { data, max_imag })
}

/// `||S - S~||_F / ||S||_F`.
pub fn frob_error(s: MatRef<'_, f64>, s_tilde: MatRef<'_, f64>) -> Result<f64> {
    if s.shape() != s_tilde.shape() {
        return Err(Error::Dimension(format!(
            "shapes {:?} and {:?} differ",
            s.shape(),
            s_tilde.shape()
        )));
    }
    let denom = s.norm_l2();
    if denom == 0.0 {
        return Err(Error::ZeroNorm("reference matrix has zero Frobenius norm".into()));
    }
    Ok((s - s_tilde).norm_l2() / denom)
}

/// Error of a model over its full window, without holding the whole
/// reconstruction in memory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelError {
    pub frob: f64,
    pub max_imag: f64,
}

pub fn model_error(model: &DmdModel, data: MatRef<'_, f64>) -> Result<ModelError> {
    if data.ncols() != model.grid.count || data.nrows() != model.nrows() {
        return Err(Error::Dimension(format!(
            "data {:?} does not match the model ({} x {})",
            data.shape(),
            model.nrows(),
            model.grid.count
        )));
    }
    let denom = data.norm_l2();
    if denom == 0.0 {
        return Err(Error::ZeroNorm("reference matrix has zero Frobenius norm".into()));
    }
    let mut sq = 0.0;
    let max_imag = for_each_block(model, 0..data.ncols(), BLOCK, |start, block| {
        let d = data.subcols(start, block.ncols()) - block;
        sq += d.squared_norm_l2();
        Ok(())
    })?;
    Ok(ModelError {
        frob: sq.sqrt() / denom,
        max_imag,
    })
}

/// Eigenvalues, lifted modes and the amplitude fit shared by the exact and
/// randomized variants.
///
/// `svd` factors the left block, `right` is the shifted block in the same
/// coordinates and `basis`, when present, maps those coordinates back to the
/// state space.
pub(crate) fn fit_from_svd(
    svd: &TruncatedSvd,
    right: MatRef<'_, f64>,
    basis: Option<MatRef<'_, f64>>,
    x0: MatRef<'_, f64>,
    grid: TimeGrid,
    window: ColumnWindow,
) -> Result<DmdModel> {
    let k = svd.rank();
    let v_scaled = Mat::from_fn(svd.modes_right.nrows(), k, |i, j| {
        svd.modes_right[(i, j)] / svd.singular[j]
    });
    let lifted = right * &v_scaled;
    if !all_finite(lifted.as_ref()) {
        return Err(Error::Nonfinite(
            "S_R V Sigma^-1 is nonfinite (zero singular value kept)".into(),
        ));
    }
    let mut a_tilde = svd.modes_left.transpose() * &lifted;
    let scale = balance(&mut a_tilde);
    let eig = a_tilde.eigen().map_err(|_| Error::Spectral { window })?;
    let lam = eig.S().column_vector();
    let w = eig.U();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (lam[a], lam[b]);
        lb.norm()
            .total_cmp(&la.norm())
            .then(lb.re.total_cmp(&la.re))
            .then(lb.im.total_cmp(&la.im))
    });
    let eigvals: Vec<c64> = order.iter().map(|&i| lam[i]).collect();
    if eigvals.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Spectral { window });
    }
    let w_re = Mat::from_fn(k, k, |i, j| scale[i] * w[(i, order[j])].re);
    let w_im = Mat::from_fn(k, k, |i, j| scale[i] * w[(i, order[j])].im);
    let (phi_re, phi_im) = match basis {
        None => (&lifted * &w_re, &lifted * &w_im),
        Some(q) => {
            let ql = q * &lifted;
            (&ql * &w_re, &ql * &w_im)
        }
    };
    let modes = Mat::from_fn(phi_re.nrows(), k, |i, j| c64::new(phi_re[(i, j)], phi_im[(i, j)]));
    if !all_finite_c(modes.as_ref()) {
        return Err(Error::Nonfinite("DMD modes are nonfinite".into()));
    }
    let x0v: Vec<c64> = x0.col(0).iter().map(|&x| c64::new(x, 0.0)).collect();
    let amps = lstsq_complex(modes.as_ref(), &x0v)?;
    let mut res_sq = 0.0;
    for i in 0..modes.nrows() {
        let mut acc = c64::new(0.0, 0.0);
        for j in 0..k {
            acc += modes[(i, j)] * amps[j];
        }
        res_sq += (acc - x0v[i]).norm_sqr();
    }
    let x0_norm = x0.norm_l2();
    let fit_residual = if x0_norm > 0.0 {
        res_sq.sqrt() / x0_norm
    } else {
        res_sq.sqrt()
    };
    Ok(DmdModel {
        modes,
        eigvals,
        amps,
        rank: k,
        grid,
        window,
        fit_residual,
    })
}

/// Exact DMD of a window at target rank `r`.
pub fn exact_dmd(view: WindowView<'_>, r: usize, sv_floor: f64) -> Result<DmdModel> {
    let pair = split_lr(view.data)?;
    let max_r = pair.left.nrows().min(pair.left.ncols());
    if r == 0 || r > max_r {
        return Err(Error::Parameter(format!(
            "target rank {r} outside 1..={max_r}"
        )));
    }
    let svd = truncated_svd(pair.left, r, sv_floor)?;
    fit_from_svd(
        &svd,
        pair.right,
        None,
        view.data.subcols(0, 1),
        view.grid,
        view.window,
    )
}
