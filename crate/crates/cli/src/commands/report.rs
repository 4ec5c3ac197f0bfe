use crate::output::{Manifest, MANIFEST};
use anyhow::{anyhow, Context, Result};
use serde::Serialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

#[derive(Serialize, Default)]
struct Entry {
    dir: String,
    command: String,
    input: String,
    wall_clock_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    argmin_r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_ranks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ep: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_rank: Option<usize>,
}

#[derive(Serialize)]
struct Summary {
    runs: Vec<Entry>,
    total_wall_clock_seconds: f64,
}

fn find_manifests(dir: &Path, found: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .collect::<std::io::Result<_>>()?;
    entries.sort_by_key(|e| e.file_name());
    for e in entries {
        let path = e.path();
        if e.file_type()?.is_dir() {
            find_manifests(&path, found)?;
        } else if e.file_name() == MANIFEST {
            found.push(path);
        }
    }
    Ok(())
}

fn sweep_summary(dir: &Path, entry: &mut Entry) -> Result<()> {
    let mut rd = csv::Reader::from_path(dir.join("sweep.csv"))?;
    let mut best: Option<(usize, f64)> = None;
    let mut failed = 0;
    for rec in rd.records() {
        let rec = rec?;
        let r: usize = rec[0].parse()?;
        match rec[1].parse::<f64>() {
            Ok(e) if best.map_or(true, |(_, b)| e < b) => best = Some((r, e)),
            Ok(_) => {}
            Err(_) => failed += 1,
        }
    }
    entry.argmin_r = best.map(|b| b.0);
    entry.min_error = best.map(|b| b.1);
    entry.failed_ranks = Some(failed);
    Ok(())
}

fn pdmd_summary(dir: &Path, entry: &mut Entry) -> Result<()> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("result.json"))?)?;
    let converged = v["converged"].as_bool().unwrap_or(false);
    entry.converged = Some(converged);
    if converged {
        entry.converged_n = v["n_parts"].as_u64().map(|n| n as usize);
    }
    entry.ep = v["ep"].as_f64();
    entry.max_rank = v["max_rank"].as_u64().map(|n| n as usize);
    Ok(())
}

/// Writes `summary.json` into `dir`.
pub fn run(dir: &Path) -> Result<()> {
    let mut manifests = Vec::new();
    find_manifests(dir, &mut manifests)?;
    if manifests.is_empty() {
        return Err(anyhow!(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no {MANIFEST} under {}", dir.display())
        )));
    }
    let mut runs = Vec::new();
    for path in &manifests {
        let m: Manifest = serde_json::from_str(&std::fs::read_to_string(path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        let run_dir = path.parent().unwrap_or(dir);
        let mut entry = Entry {
            dir: run_dir
                .strip_prefix(dir)
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            command: m.command.clone(),
            input: m.input.clone(),
            wall_clock_seconds: m.wall_clock_seconds,
            ..Entry::default()
        };
        match m.command.as_str() {
            "rank-sweep" => sweep_summary(run_dir, &mut entry)?,
            "pdmd" => pdmd_summary(run_dir, &mut entry)?,
            _ => {}
        }
        runs.push(entry);
    }
    let summary = Summary {
        total_wall_clock_seconds: runs.iter().map(|r| r.wall_clock_seconds).sum(),
        runs,
    };
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    std::fs::write(dir.join("summary.json"), &text)?;
    print!("{text}");
    Ok(())
}
