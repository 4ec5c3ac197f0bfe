pub mod generate;
pub mod pdmd;
pub mod report;
pub mod sweep;

use anyhow::{Context, Result};
use pdmd_core::snapshots::load;
use pdmd_core::SnapshotMatrix;
use std::path::Path;

pub fn load_dataset(path: &Path) -> Result<SnapshotMatrix> {
    load(path).with_context(|| format!("loading {}", path.display()))
}
