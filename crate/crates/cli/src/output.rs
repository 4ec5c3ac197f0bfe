use anyhow::{Context, Result};
use serde::Serialize;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const MANIFEST: &str = "manifest.json";

/// Full round-trip precision: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn opt_int(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Output directory that remembers every file written into it.
pub struct OutDir {
    root: PathBuf,
    files: Vec<String>,
    started: Instant,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
            started: Instant::now(),
        })
    }

    /// Path for `name` inside the directory, recorded as an output.
    pub fn file(&mut self, name: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
        Ok(path)
    }

    pub fn csv(&mut self, name: &str, header: &[&str]) -> Result<csv::Writer<File>> {
        let path = self.file(name)?;
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(header)?;
        Ok(w)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.file(name)?;
        let text = serde_json::to_string_pretty(value)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    /// Write the manifest. Must be the last write of a command.
    pub fn finish(mut self, command: &str, input: &str, config: serde_json::Value, seed: u64) -> Result<()> {
        let mut outputs = self.files.clone();
        outputs.sort();
        let manifest = Manifest {
            command: command.to_string(),
            input: input.to_string(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            outputs,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = self.root.join(MANIFEST);
        self.files.clear();
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub command: String,
    /// Preset name or dataset path.
    pub input: String,
    pub seed: u64,
    pub version: String,
    pub config: serde_json::Value,
    /// Paths relative to the manifest directory.
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}
