use crate::output::OutDir;
use crate::settings::Common;
use anyhow::Result;
use pdmd_core::snapshots::save_with_sidecar;
use pdmd_core::{preset, simulate, Preset, Scale};
use serde_json::json;
use std::path::Path;

/// Writes `<preset>_<scale>.pdmd` and its sidecar.
pub fn run(name: Preset, scale: Scale, common: &Common, out: &Path) -> Result<()> {
    let problem = preset(name, scale, common.seed);
    let mut dir = OutDir::create(out)?;
    let s = simulate(&problem)?;
    let stem = format!("{}_{}", name.name(), scale.name());
    let meta = json!({
        "preset": name.name(),
        "scale": scale.name(),
        "seed": common.seed,
        "rows": s.nrows(),
        "cols": s.ncols(),
        "layout": s.layout(),
        "grid": s.grid(),
        "problem": problem,
    });
    let data = dir.file(&format!("{stem}.pdmd"))?;
    dir.file(&format!("{stem}.json"))?;
    save_with_sidecar(&s, &data, &meta)?;
    eprintln!("{stem}: {} x {} -> {}", s.nrows(), s.ncols(), data.display());
    let config = json!({ "preset": name.name(), "scale": scale.name(), "problem": problem });
    dir.finish("generate", &stem, config, common.seed)
}
