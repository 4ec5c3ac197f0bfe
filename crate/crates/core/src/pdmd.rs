//! Piecewise DMD: one randomized DMD per contiguous window, refined until
//! every window passes a max-norm gate and the assembled reconstruction
//! meets a Frobenius tolerance.

use crate::dmd::{frob_error, reconstruct, DmdModel};
use crate::error::{Error, Result};
use crate::linalg::numerical_rank;
use crate::qb::{randomized_dmd, QbConfig};
use crate::seed::derive_seed;
use crate::snapshots::{partition, ColumnWindow, SnapshotMatrix};
use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

/// How the target rank of each window is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankRule {
    /// `min(len - 1, rank_cap, rank(S_i))`.
    #[default]
    NumericalRank,
    /// `min(len - 1, rank_cap)`.
    WidthCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdmdConfig {
    /// Per-window gate on the relative max-norm error.
    pub tol_bar: f64,
    /// Target for the assembled Frobenius error.
    pub tol: f64,
    pub n_init: usize,
    pub dn: usize,
    pub nu_star: usize,
    pub rank_cap: usize,
    pub rank_rule: RankRule,
    /// Oversampling, power iterations and base seed; the target rank and
    /// seed of each window are derived from it.
    pub qb: QbConfig,
    pub sv_floor: f64,
}

impl Default for PdmdConfig {
    fn default() -> Self {
        Self {
            tol_bar: 1e-1,
            tol: 1e-6,
            n_init: 1,
            dn: 1,
            nu_star: 10,
            rank_cap: 200,
            rank_rule: RankRule::NumericalRank,
            qb: QbConfig::default(),
            sv_floor: 0.0,
        }
    }
}

impl PdmdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_bar > 0.0) || !(self.tol > 0.0) {
            return Err(Error::Parameter("tolerances must be > 0".into()));
        }
        if self.n_init == 0 || self.dn == 0 {
            return Err(Error::Parameter("n_init and dn must be >= 1".into()));
        }
        if self.nu_star < 2 {
            return Err(Error::Parameter("nu_star must be >= 2".into()));
        }
        if self.rank_cap == 0 {
            return Err(Error::Parameter("rank_cap must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "subset")]
pub enum PassStatus {
    /// Every gate passed and `E_p <= tol`.
    Converged,
    /// Every gate passed but `E_p > tol`.
    AboveTolerance,
    /// Window `subset` (0-based) exceeded `tol_bar`; later windows were not fitted.
    GateFailed(usize),
    PartitionTooFine,
}

impl PassStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PassStatus::Converged => "converged",
            PassStatus::AboveTolerance => "above_tolerance",
            PassStatus::GateFailed(_) => "gate_failed",
            PassStatus::PartitionTooFine => "partition_too_fine",
        }
    }

    pub fn gates_passed(&self) -> bool {
        matches!(self, PassStatus::Converged | PassStatus::AboveTolerance)
    }
}

/// Outcome of one pass at a fixed number of windows.
///
/// On a gate failure `models`, `ranks` and `err_inf` hold the windows fitted
/// up to and including the failing one; `ep`, `eps_time` and
/// `reconstruction` are only present when every gate passed.
#[derive(Clone, Debug)]
pub struct PdmdResult {
    pub n_parts: usize,
    pub windows: Vec<ColumnWindow>,
    pub models: Vec<DmdModel>,
    pub ranks: Vec<usize>,
    pub err_inf: Vec<f64>,
    pub ep: Option<f64>,
    pub eps_time: Option<Vec<f64>>,
    pub status: PassStatus,
    pub reconstruction: Option<Mat<f64>>,
    /// Largest imaginary part discarded over all window reconstructions.
    pub max_imag: f64,
}

impl PdmdResult {
    pub fn models_fitted(&self) -> usize {
        self.models.len()
    }
}

fn column_error(x: MatRef<'_, f64>, y: MatRef<'_, f64>, j: usize, norm: impl Fn(&mut dyn Iterator<Item = f64>) -> f64) -> f64 {
    let num = norm(&mut x.col(j).iter().zip(y.col(j).iter()).map(|(a, b)| a - b));
    let den = norm(&mut x.col(j).iter().copied());
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn inf_norm(it: &mut dyn Iterator<Item = f64>) -> f64 {
    it.fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn two_norm(it: &mut dyn Iterator<Item = f64>) -> f64 {
    it.map(|x| x * x).sum::<f64>().sqrt()
}

fn same_shape(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "shapes {:?} and {:?} differ",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

/// `max_k ||x_k - x~_k||_inf / ||x_k||_inf`, absolute for zero columns.
pub fn err_inf_window(data: MatRef<'_, f64>, recon: MatRef<'_, f64>) -> Result<f64> {
    same_shape(data, recon)?;
    Ok((0..data.ncols())
        .map(|j| column_error(data, recon, j, inf_norm))
        .fold(0.0_f64, f64::max))
}

/// `||x_k - x~_k||_2 / ||x_k||_2` per column, absolute for zero columns.
pub fn eps_time(data: MatRef<'_, f64>, recon: MatRef<'_, f64>) -> Result<Vec<f64>> {
    same_shape(data, recon)?;
    Ok((0..data.ncols())
        .map(|j| column_error(data, recon, j, two_norm))
        .collect())
}

/// Largest target rank of a pass.
pub fn max_rank(result: &PdmdResult) -> usize {
    result.ranks.iter().copied().max().unwrap_or(0)
}

/// Target rank of one window under `config`.
pub fn window_rank(data: MatRef<'_, f64>, config: &PdmdConfig) -> Result<usize> {
    let cap = (data.ncols() - 1).min(config.rank_cap).min(data.nrows());
    let r = match config.rank_rule {
        RankRule::WidthCap => cap,
        RankRule::NumericalRank => cap.min(numerical_rank(data)?),
    };
    Ok(r.max(1))
}

/// One pass with `n_parts` windows, stopping at the first failed gate.
///
/// A window whose fit fails (spectral failure, overflow, nonfinite values)
/// counts as a failed gate with infinite error.
pub fn pdmd_pass(s: &SnapshotMatrix, n_parts: usize, config: &PdmdConfig) -> Result<PdmdResult> {
    config.validate()?;
    let windows = match partition(s, n_parts, config.nu_star) {
        Ok(w) => w,
        Err(Error::PartitionTooFine { .. }) => {
            return Ok(PdmdResult {
                n_parts,
                windows: Vec::new(),
                models: Vec::new(),
                ranks: Vec::new(),
                err_inf: Vec::new(),
                ep: None,
                eps_time: None,
                status: PassStatus::PartitionTooFine,
                reconstruction: None,
                max_imag: 0.0,
            })
        }
        Err(e) => return Err(e),
    };
    let mut models = Vec::with_capacity(n_parts);
    let mut ranks = Vec::with_capacity(n_parts);
    let mut err_inf = Vec::with_capacity(n_parts);
    let mut recon = Mat::<f64>::zeros(s.nrows(), s.ncols());
    let mut max_imag = 0.0_f64;
    for (i, &w) in windows.iter().enumerate() {
        let view = s.view(w)?;
        let r = window_rank(view.data, config)?;
        let qb = config
            .qb
            .with_rank(r)
            .with_seed(derive_seed(config.qb.seed, n_parts, i));
        ranks.push(r);
        let fitted = randomized_dmd(view, &qb, config.sv_floor)
            .and_then(|m| reconstruct(&m, 0..w.len).map(|rec| (m, rec)));
        let (model, rec) = match fitted {
            Ok(v) => v,
            Err(Error::Spectral { .. } | Error::Nonfinite(_) | Error::PowerOverflow { .. }) => {
                err_inf.push(f64::INFINITY);
                return Ok(gate_failure(n_parts, windows, models, ranks, err_inf, i, max_imag));
            }
            Err(e) => return Err(e),
        };
        let e = err_inf_window(view.data, rec.data.as_ref())?;
        models.push(model);
        err_inf.push(e);
        max_imag = max_imag.max(rec.max_imag);
        if !(e <= config.tol_bar) {
            return Ok(gate_failure(n_parts, windows, models, ranks, err_inf, i, max_imag));
        }
        recon.subcols_mut(w.start, w.len).copy_from(&rec.data);
    }
    let ep = frob_error(s.data(), recon.as_ref())?;
    let eps = eps_time(s.data(), recon.as_ref())?;
    let status = if ep <= config.tol {
        PassStatus::Converged
    } else {
        PassStatus::AboveTolerance
    };
    Ok(PdmdResult {
        n_parts,
        windows,
        models,
        ranks,
        err_inf,
        ep: Some(ep),
        eps_time: Some(eps),
        status,
        reconstruction: Some(recon),
        max_imag,
    })
}

fn gate_failure(
    n_parts: usize,
    windows: Vec<ColumnWindow>,
    models: Vec<DmdModel>,
    ranks: Vec<usize>,
    err_inf: Vec<f64>,
    subset: usize,
    max_imag: f64,
) -> PdmdResult {
    PdmdResult {
        n_parts,
        windows,
        models,
        ranks,
        err_inf,
        ep: None,
        eps_time: None,
        status: PassStatus::GateFailed(subset),
        reconstruction: None,
        max_imag,
    }
}

/// One row of the convergence trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n_parts: usize,
    pub status: PassStatus,
    pub ep: Option<f64>,
    pub max_rank: usize,
    pub failed_subset: Option<usize>,
    pub models_fitted: usize,
}

impl TraceRow {
    fn of(result: &PdmdResult) -> Self {
        Self {
            n_parts: result.n_parts,
            status: result.status,
            ep: result.ep,
            max_rank: max_rank(result),
            failed_subset: match result.status {
                PassStatus::GateFailed(i) => Some(i),
                _ => None,
            },
            models_fitted: result.models_fitted(),
        }
    }
}

/// Result of the outer refinement loop.
///
/// `result` is the converged pass, or when the partition became too fine,
/// the gated pass with the smallest `E_p` (none if no pass got through the
/// gates).
#[derive(Clone, Debug)]
pub struct Convergence {
    pub converged: bool,
    pub result: Option<PdmdResult>,
    pub trace: Vec<TraceRow>,
}

impl Convergence {
    pub fn best_ep(&self) -> Option<f64> {
        self.result.as_ref().and_then(|r| r.ep)
    }
}

/// Increase the number of windows by `dn` until a pass converges or the
/// windows would become narrower than `nu_star`.
pub fn pdmd_converge(s: &SnapshotMatrix, config: &PdmdConfig) -> Result<Convergence> {
    pdmd_converge_with(s, config, |_| {})
}

/// [`pdmd_converge`] with a callback after every pass.
pub fn pdmd_converge_with(
    s: &SnapshotMatrix,
    config: &PdmdConfig,
    mut on_pass: impl FnMut(&TraceRow),
) -> Result<Convergence> {
    config.validate()?;
    let mut trace = Vec::new();
    let mut best: Option<PdmdResult> = None;
    let mut n = config.n_init;
    loop {
        let result = pdmd_pass(s, n, config)?;
        let row = TraceRow::of(&result);
        on_pass(&row);
        trace.push(row);
        match result.status {
            PassStatus::Converged => {
                return Ok(Convergence {
                    converged: true,
                    result: Some(result),
                    trace,
                })
            }
            PassStatus::PartitionTooFine => {
                return Ok(Convergence {
                    converged: false,
                    result: best,
                    trace,
                })
            }
            PassStatus::AboveTolerance => {
                let better = match &best {
                    Some(b) => result.ep < b.ep,
                    None => true,
                };
                if better {
                    best = Some(result);
                }
            }
            PassStatus::GateFailed(_) => {}
        }
        n += config.dn;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn err_inf_examples() {
        let x = Mat::from_fn(2, 1, |i, _| [2.0, 0.0][i]);
        let y = Mat::from_fn(2, 1, |i, _| [1.0, 0.0][i]);
        assert_eq!(err_inf_window(x.as_ref(), y.as_ref()).unwrap(), 0.5);
        assert_eq!(err_inf_window(x.as_ref(), x.as_ref()).unwrap(), 0.0);
        let x = Mat::from_fn(1, 2, |_, _| 1.0);
        let y = Mat::from_fn(1, 2, |_, j| [0.9, 0.7][j]);
        assert!((err_inf_window(x.as_ref(), y.as_ref()).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn zero_column_uses_absolute_error() {
        let x = Mat::<f64>::zeros(2, 1);
        let y = Mat::from_fn(2, 1, |i, _| [0.25, -0.5][i]);
        assert_eq!(err_inf_window(x.as_ref(), y.as_ref()).unwrap(), 0.5);
    }

    #[test]
    fn eps_examples() {
        let x = Mat::from_fn(2, 1, |i, _| [3.0, 4.0][i]);
        let z = Mat::<f64>::zeros(2, 1);
        assert_eq!(eps_time(x.as_ref(), z.as_ref()).unwrap(), vec![1.0]);
        assert_eq!(eps_time(x.as_ref(), x.as_ref()).unwrap(), vec![0.0]);
    }

    #[test]
    fn max_rank_of_vector() {
        let r = PdmdResult {
            n_parts: 3,
            windows: vec![],
            models: vec![],
            ranks: vec![3, 7, 2],
            err_inf: vec![],
            ep: None,
            eps_time: None,
            status: PassStatus::AboveTolerance,
            reconstruction: None,
            max_imag: 0.0,
        };
        assert_eq!(max_rank(&r), 7);
    }
}
