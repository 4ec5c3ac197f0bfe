use super::load_dataset;
use crate::output::{num, OutDir};
use crate::settings::Common;
use crate::Usage;
use anyhow::Result;
use pdmd_core::dmd::for_each_block;
use pdmd_core::faer::MatRef;
use pdmd_core::seed::derive_seed;
use pdmd_core::snapshots::spatial_mean_series;
use pdmd_core::{randomized_dmd, DmdModel, Error, Field, Layout, SnapshotMatrix};
use rayon::prelude::*;
use serde_json::json;
use std::path::Path;

struct Outcome {
    r: usize,
    error: Option<f64>,
    max_imag: Option<f64>,
    status: &'static str,
    message: String,
    means: Option<Means>,
}

#[derive(Clone, Debug, Default)]
pub struct Means {
    pub u: Vec<f64>,
    pub v: Option<Vec<f64>>,
}

fn status_of(err: &Error) -> Option<&'static str> {
    Some(match err {
        Error::Spectral { .. } => "spectral",
        Error::Nonfinite(_) => "nonfinite",
        Error::PowerOverflow { .. } => "power_overflow",
        Error::Degenerate(_) => "degenerate",
        Error::ZeroNorm(_) => "zero_norm",
        _ => return None,
    })
}

pub fn block_means(block: MatRef<'_, f64>, layout: Layout) -> (Vec<f64>, Option<Vec<f64>>) {
    let mean = |rows: std::ops::Range<usize>, j: usize| {
        let n = rows.len() as f64;
        rows.map(|i| block[(i, j)]).sum::<f64>() / n
    };
    let cols = 0..block.ncols();
    match layout {
        Layout::Single(n) => (cols.map(|j| mean(0..n, j)).collect(), None),
        Layout::Coupled(n) => (
            cols.clone().map(|j| mean(0..n, j)).collect(),
            Some(cols.map(|j| mean(n..2 * n, j)).collect()),
        ),
    }
}

pub fn data_means(s: &SnapshotMatrix) -> Result<Means> {
    Ok(match s.layout() {
        Layout::Single(_) => Means {
            u: spatial_mean_series(s, Field::U)?,
            v: None,
        },
        Layout::Coupled(_) => Means {
            u: spatial_mean_series(s, Field::U)?,
            v: Some(spatial_mean_series(s, Field::V)?),
        },
    })
}

/// Frobenius error and largest imaginary part of a global model, plus the
/// spatial means of its reconstruction when asked, in one streaming pass.
fn evaluate(s: &SnapshotMatrix, model: &DmdModel, with_means: bool) -> pdmd_core::Result<(f64, f64, Option<Means>)> {
    let data = s.data();
    let denom = data.norm_l2();
    if denom == 0.0 {
        return Err(Error::ZeroNorm("dataset has zero Frobenius norm".into()));
    }
    let mut sq = 0.0;
    let mut means = with_means.then(Means::default);
    let max_imag = for_each_block(model, 0..s.ncols(), 256, |start, block| {
        sq += (data.subcols(start, block.ncols()) - block).squared_norm_l2();
        if let Some(m) = means.as_mut() {
            let (u, v) = block_means(block, s.layout());
            m.u.extend(u);
            if let Some(v) = v {
                m.v.get_or_insert_with(Vec::new).extend(v);
            }
        }
        Ok(())
    })?;
    Ok((sq.sqrt() / denom, max_imag, means))
}

fn one(s: &SnapshotMatrix, r: usize, common: &Common, with_means: bool) -> Result<Outcome> {
    let qb = common.qb(r).with_seed(derive_seed(common.seed, 1, 0));
    let res = randomized_dmd(s.full_view(), &qb, common.sv_floor).and_then(|m| evaluate(s, &m, with_means));
    Ok(match res {
        Ok((e, imag, means)) => Outcome {
            r,
            error: Some(e),
            max_imag: Some(imag),
            status: "ok",
            message: String::new(),
            means,
        },
        Err(err) => match status_of(&err) {
            Some(status) => Outcome {
                r,
                error: None,
                max_imag: None,
                status,
                message: err.to_string(),
                means: None,
            },
            None => return Err(err.into()),
        },
    })
}

pub fn run(
    dataset: &Path,
    r_min: usize,
    r_max: usize,
    step: usize,
    with_means: bool,
    common: &Common,
    out: &Path,
) -> Result<()> {
    let s = load_dataset(dataset)?;
    let limit = s.nrows().min(s.ncols());
    if r_min == 0 || step == 0 || r_min > r_max || r_max > limit {
        return Err(Usage(format!(
            "need 1 <= r_min <= r_max <= {limit} and step >= 1, got {r_min}..={r_max} step {step}"
        ))
        .into());
    }
    let mut dir = OutDir::create(out)?;
    let ranks: Vec<usize> = (r_min..=r_max).step_by(step).collect();
    let outcomes: Vec<Outcome> = ranks
        .par_iter()
        .map(|&r| one(&s, r, common, with_means))
        .collect::<Result<_>>()?;

    let mut w = dir.csv("sweep.csv", &["r", "error", "max_imag", "status", "message"])?;
    for o in &outcomes {
        w.write_record([
            o.r.to_string(),
            o.error.map(num).unwrap_or_default(),
            o.max_imag.map(num).unwrap_or_default(),
            o.status.to_string(),
            o.message.clone(),
        ])?;
    }
    w.flush()?;

    if with_means {
        let grid = s.grid();
        let mut w = dir.csv("sweep_means.csv", &["source", "r", "k", "t", "mean_u", "mean_v"])?;
        let mut emit = |source: &str, r: String, m: &Means| -> Result<()> {
            for (k, &u) in m.u.iter().enumerate() {
                let v = m.v.as_ref().map(|v| num(v[k])).unwrap_or_default();
                w.write_record([source.to_string(), r.clone(), k.to_string(), num(grid.time(k)), num(u), v])?;
            }
            Ok(())
        };
        emit("data", String::new(), &data_means(&s)?)?;
        for o in &outcomes {
            if let Some(m) = &o.means {
                emit("dmd", o.r.to_string(), m)?;
            }
        }
        w.flush()?;
    }

    let best = outcomes
        .iter()
        .filter_map(|o| o.error.map(|e| (o.r, e)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((r, e)) = best {
        eprintln!("min error {e:.4e} at r = {r}");
    }
    let config = json!({
        "r_min": r_min,
        "r_max": r_max,
        "step": step,
        "means": with_means,
        "common": common,
        "sketch_seed": derive_seed(common.seed, 1, 0),
    });
    dir.finish("rank-sweep", &dataset.display().to_string(), config, common.seed)
}
