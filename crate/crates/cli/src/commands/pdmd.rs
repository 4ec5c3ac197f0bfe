use super::load_dataset;
use super::sweep::{block_means, data_means};
use crate::output::{num, opt_int, opt_num, OutDir};
use crate::settings::Common;
use crate::NotConverged;
use anyhow::Result;
use pdmd_core::model_io::save_model;
use pdmd_core::pdmd::{max_rank, pdmd_converge_with};
use pdmd_core::snapshots::save_with_sidecar;
use pdmd_core::{PdmdConfig, PdmdResult, SnapshotMatrix};
use serde::Serialize;
use serde_json::json;
use std::path::Path;

#[derive(Serialize)]
struct ResultRecord {
    converged: bool,
    /// Status of the reported pass, or of the last pass when none got through the gates.
    status: &'static str,
    n_parts: Option<usize>,
    ep: Option<f64>,
    max_rank: Option<usize>,
    max_imag: Option<f64>,
    passes: usize,
    last_n_parts: usize,
    config: PdmdConfig,
}

fn write_subsets(dir: &mut OutDir, s: &SnapshotMatrix, r: &PdmdResult) -> Result<()> {
    let grid = s.grid();
    let mut w = dir.csv(
        "subsets.csv",
        &["subset", "start", "len", "t_start", "t_end", "target_rank", "model_rank", "err_inf"],
    )?;
    for (i, win) in r.windows.iter().enumerate().take(r.err_inf.len()) {
        w.write_record([
            i.to_string(),
            win.start.to_string(),
            win.len.to_string(),
            num(grid.time(win.start)),
            num(grid.time(win.end() - 1)),
            r.ranks[i].to_string(),
            opt_int(r.models.get(i).map(|m| m.rank)),
            num(r.err_inf[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_series(dir: &mut OutDir, s: &SnapshotMatrix, r: &PdmdResult) -> Result<()> {
    let grid = s.grid();
    if let Some(eps) = &r.eps_time {
        let mut w = dir.csv("time_error.csv", &["k", "t", "eps"])?;
        for (k, &e) in eps.iter().enumerate() {
            w.write_record([k.to_string(), num(grid.time(k)), num(e)])?;
        }
        w.flush()?;
    }
    if let Some(recon) = &r.reconstruction {
        let data = data_means(s)?;
        let (ru, rv) = block_means(recon.as_ref(), s.layout());
        let mut w = dir.csv("means.csv", &["k", "t", "data_u", "data_v", "recon_u", "recon_v"])?;
        for k in 0..s.ncols() {
            w.write_record([
                k.to_string(),
                num(grid.time(k)),
                num(data.u[k]),
                opt_num(data.v.as_ref().map(|v| v[k])),
                num(ru[k]),
                opt_num(rv.as_ref().map(|v| v[k])),
            ])?;
        }
        w.flush()?;
    }
    Ok(())
}

pub fn run(
    dataset: &Path,
    cfg: &PdmdConfig,
    common: &Common,
    save_reconstruction: bool,
    save_models: bool,
    out: &Path,
) -> Result<()> {
    cfg.validate().map_err(|e| crate::Usage(e.to_string()))?;
    let s = load_dataset(dataset)?;
    let mut dir = OutDir::create(out)?;
    let conv = pdmd_converge_with(&s, cfg, |row| {
        eprintln!(
            "N = {:4}  {:18}  E_p = {}  max rank = {}",
            row.n_parts,
            row.status.label(),
            row.ep.map(|e| format!("{e:.4e}")).unwrap_or_else(|| "-".into()),
            row.max_rank
        );
    })?;

    let mut w = dir.csv(
        "trace.csv",
        &["n_parts", "status", "failed_subset", "models_fitted", "ep", "max_rank"],
    )?;
    for row in &conv.trace {
        w.write_record([
            row.n_parts.to_string(),
            row.status.label().to_string(),
            opt_int(row.failed_subset),
            row.models_fitted.to_string(),
            opt_num(row.ep),
            row.max_rank.to_string(),
        ])?;
    }
    w.flush()?;

    let last = conv.trace.last().expect("at least one pass");
    let record = ResultRecord {
        converged: conv.converged,
        status: conv.result.as_ref().map(|r| r.status.label()).unwrap_or(last.status.label()),
        n_parts: conv.result.as_ref().map(|r| r.n_parts),
        ep: conv.best_ep(),
        max_rank: conv.result.as_ref().map(max_rank),
        max_imag: conv.result.as_ref().map(|r| r.max_imag),
        passes: conv.trace.len(),
        last_n_parts: last.n_parts,
        config: *cfg,
    };

    if let Some(r) = &conv.result {
        write_subsets(&mut dir, &s, r)?;
        write_series(&mut dir, &s, r)?;
        if save_reconstruction {
            if let Some(recon) = &r.reconstruction {
                let rec = SnapshotMatrix::new(recon.clone(), s.grid(), s.layout())?;
                let path = dir.file("reconstruction.pdmd")?;
                dir.file("reconstruction.json")?;
                let meta = json!({ "source": dataset.display().to_string(), "n_parts": r.n_parts, "ep": r.ep });
                save_with_sidecar(&rec, &path, &meta)?;
            }
        }
        if save_models {
            for (i, m) in r.models.iter().enumerate() {
                let path = dir.file(&format!("models/window_{i:04}.json"))?;
                dir.file(&format!("models/window_{i:04}.pdmd"))?;
                save_model(m, &path)?;
            }
        }
    }
    dir.json("result.json", &record)?;

    let config = json!({ "pdmd": cfg, "common": common, "save_reconstruction": save_reconstruction, "save_models": save_models });
    dir.finish("pdmd", &dataset.display().to_string(), config, common.seed)?;

    if conv.converged {
        eprintln!(
            "converged at N = {} with E_p = {:.4e}",
            record.n_parts.unwrap_or(0),
            record.ep.unwrap_or(f64::NAN)
        );
        Ok(())
    } else {
        let best = record.ep.map(|e| format!("{e:.4e}")).unwrap_or_else(|| "none".into());
        Err(NotConverged(format!(
            "no convergence up to N = {} (best E_p {best})",
            record.last_n_parts
        ))
        .into())
    }
}
