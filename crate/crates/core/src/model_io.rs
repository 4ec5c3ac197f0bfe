//! JSON form of a [`DmdModel`] with its modes in a companion PDMD1 file.
//!
//! The companion file lives next to the JSON file with extension `pdmd`
//! and holds the real parts of the modes stacked over the imaginary parts,
//! tagged as coupled data with block size `n`.

use crate::dmd::DmdModel;
use crate::error::{Error, Result};
use crate::snapshots::{read_matrix, write_matrix, ColumnWindow, Layout, TimeGrid};
use faer::{c64, Mat};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelRecord {
    pub rank: usize,
    pub eigvals: Vec<[f64; 2]>,
    pub amps: Vec<[f64; 2]>,
    pub fit_residual: f64,
    pub window: ColumnWindow,
    pub grid: TimeGrid,
    pub modes_file: String,
}

pub fn save_model(model: &DmdModel, json_path: impl AsRef<Path>) -> Result<()> {
    let json_path = json_path.as_ref();
    let modes_path = json_path.with_extension("pdmd");
    let n = model.modes.nrows();
    let stacked = Mat::from_fn(2 * n, model.rank, |i, j| {
        if i < n {
            model.modes[(i, j)].re
        } else {
            model.modes[(i - n, j)].im
        }
    });
    write_matrix(stacked.as_ref(), Layout::Coupled(n), 0.0, 1.0, &modes_path)?;
    let record = ModelRecord {
        rank: model.rank,
        eigvals: model.eigvals.iter().map(|z| [z.re, z.im]).collect(),
        amps: model.amps.iter().map(|z| [z.re, z.im]).collect(),
        fit_residual: model.fit_residual,
        window: model.window,
        grid: model.grid,
        modes_file: modes_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    std::fs::write(json_path, serde_json::to_string_pretty(&record)? + "\n")?;
    Ok(())
}

pub fn load_model(json_path: impl AsRef<Path>) -> Result<DmdModel> {
    let json_path = json_path.as_ref();
    let record: ModelRecord = serde_json::from_str(&std::fs::read_to_string(json_path)?)?;
    let dir = json_path.parent().unwrap_or_else(|| Path::new("."));
    let raw = read_matrix(dir.join(&record.modes_file))?;
    let n = raw.layout.block();
    if raw.data.ncols() != record.rank || record.eigvals.len() != record.rank || record.amps.len() != record.rank {
        return Err(Error::Format("model rank disagrees with its stored arrays".into()));
    }
    let modes = Mat::from_fn(n, record.rank, |i, j| c64::new(raw.data[(i, j)], raw.data[(n + i, j)]));
    Ok(DmdModel {
        modes,
        eigvals: record.eigvals.iter().map(|p| c64::new(p[0], p[1])).collect(),
        amps: record.amps.iter().map(|p| c64::new(p[0], p[1])).collect(),
        rank: record.rank,
        grid: record.grid,
        window: record.window,
        fit_residual: record.fit_residual,
    })
}
