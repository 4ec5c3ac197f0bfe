use anyhow::{Context, Result};
use pdmd_core::{PdmdConfig, QbConfig, RankRule};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Values read from the TOML config file. Every key is optional; flags given
/// on the command line take precedence.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub sv_floor: Option<f64>,
    pub oversample: Option<usize>,
    pub power_iters: Option<usize>,
    pub threads: Option<usize>,
    pub tol_bar: Option<f64>,
    pub tol: Option<f64>,
    pub n_init: Option<usize>,
    pub dn: Option<usize>,
    pub nu_star: Option<usize>,
    pub rank_cap: Option<usize>,
    pub rank_rule: Option<RankRule>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| crate::Usage(format!("config {}: {e}", path.display())).into())
    }
}

/// Global settings after merging flags, config file and defaults.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Common {
    pub seed: u64,
    pub sv_floor: f64,
    pub oversample: usize,
    pub power_iters: usize,
    pub threads: Option<usize>,
}

impl Common {
    pub fn qb(&self, target_rank: usize) -> QbConfig {
        QbConfig {
            target_rank,
            oversample: self.oversample,
            power_iters: self.power_iters,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PdmdFlags {
    pub tol_bar: Option<f64>,
    pub tol: Option<f64>,
    pub n_init: Option<usize>,
    pub dn: Option<usize>,
    pub nu_star: Option<usize>,
    pub rank_cap: Option<usize>,
    pub rank_rule: Option<RankRule>,
}

pub fn pdmd_config(common: &Common, flags: &PdmdFlags, file: &FileConfig) -> PdmdConfig {
    let d = PdmdConfig::default();
    PdmdConfig {
        tol_bar: flags.tol_bar.or(file.tol_bar).unwrap_or(d.tol_bar),
        tol: flags.tol.or(file.tol).unwrap_or(d.tol),
        n_init: flags.n_init.or(file.n_init).unwrap_or(d.n_init),
        dn: flags.dn.or(file.dn).unwrap_or(d.dn),
        nu_star: flags.nu_star.or(file.nu_star).unwrap_or(d.nu_star),
        rank_cap: flags.rank_cap.or(file.rank_cap).unwrap_or(d.rank_cap),
        rank_rule: flags.rank_rule.or(file.rank_rule).unwrap_or(d.rank_rule),
        qb: common.qb(1),
        sv_floor: common.sv_floor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str("tol = 1e-4\ndn = 3\nrank_rule = \"width_cap\"").unwrap();
        let common = Common {
            seed: 1,
            sv_floor: 0.0,
            oversample: 10,
            power_iters: 2,
            threads: None,
        };
        let flags = PdmdFlags {
            dn: Some(5),
            ..Default::default()
        };
        let cfg = pdmd_config(&common, &flags, &file);
        assert_eq!(cfg.tol, 1e-4);
        assert_eq!(cfg.dn, 5);
        assert_eq!(cfg.tol_bar, 0.1);
        assert_eq!(cfg.rank_rule, RankRule::WidthCap);
        assert_eq!(cfg.qb.seed, 1);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(toml::from_str::<FileConfig>("tolerance = 1").is_err());
    }
}
