//! `pdmd`: generate reaction-diffusion datasets, sweep the rank of a global
//! randomized DMD, run piecewise DMD and summarize results.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O or file format, 4 blow-up or
//! numerical failure, 5 no convergence.

mod commands;
mod output;
mod settings;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdmd_core::{Preset, RankRule, Scale};
use settings::{Common, FileConfig, PdmdFlags};
use std::path::PathBuf;
use std::process::ExitCode;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;
pub const EXIT_NOT_CONVERGED: u8 = 5;

/// Invalid arguments or config values.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// The run completed and wrote its outputs but did not converge.
#[derive(Debug)]
pub struct NotConverged(pub String);

impl std::fmt::Display for NotConverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NotConverged {}

#[derive(Parser, Debug)]
#[command(name = "pdmd", version, about = "Piecewise dynamic mode decomposition of reaction-diffusion data")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Base seed for random initial data and sketches [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Relative singular value floor for the DMD truncation [default: 0]
    #[arg(long, global = true)]
    sv_floor: Option<f64>,
    /// Sketch oversampling [default: 10]
    #[arg(long, global = true)]
    oversample: Option<usize>,
    /// Power iterations of the range finder [default: 2]
    #[arg(long, global = true)]
    power_iters: Option<usize>,
    /// TOML file with default values for any flag
    #[arg(long, global = true, env = "PDMD_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a named problem and write the snapshot matrix
    Generate {
        #[arg(long, value_parser = parse_preset)]
        preset: Preset,
        #[arg(long, value_parser = parse_scale, default_value = "desk")]
        scale: Scale,
    },
    /// Global randomized DMD error for a range of target ranks
    RankSweep {
        dataset: PathBuf,
        #[arg(long, default_value_t = 1)]
        r_min: usize,
        #[arg(long)]
        r_max: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Also write the spatial means of every reconstruction
        #[arg(long)]
        means: bool,
    },
    /// Refine a piecewise DMD until it converges
    Pdmd {
        dataset: PathBuf,
        #[command(flatten)]
        tol: PdmdArgs,
        /// Write the assembled reconstruction as a PDMD1 file
        #[arg(long)]
        save_reconstruction: bool,
        /// Write every window model
        #[arg(long)]
        save_models: bool,
    },
    /// Summarize the manifests found under a directory
    Report { dir: PathBuf },
}

#[derive(Args, Debug)]
struct PdmdArgs {
    /// Per-window max-norm gate [default: 0.1]
    #[arg(long)]
    tol_bar: Option<f64>,
    /// Frobenius tolerance of the assembled reconstruction [default: 1e-6]
    #[arg(long)]
    tol: Option<f64>,
    /// First number of windows [default: 1]
    #[arg(long)]
    n_init: Option<usize>,
    /// Increment of the number of windows [default: 1]
    #[arg(long)]
    dn: Option<usize>,
    /// Smallest admissible window width [default: 10]
    #[arg(long)]
    nu_star: Option<usize>,
    /// Largest target rank of a window [default: 200]
    #[arg(long)]
    rank_cap: Option<usize>,
    /// Target rank of each window [default: numerical-rank]
    #[arg(long, value_enum)]
    rank_rule: Option<RankRuleArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RankRuleArg {
    NumericalRank,
    WidthCap,
}

impl From<RankRuleArg> for RankRule {
    fn from(r: RankRuleArg) -> Self {
        match r {
            RankRuleArg::NumericalRank => RankRule::NumericalRank,
            RankRuleArg::WidthCap => RankRule::WidthCap,
        }
    }
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: pdmd_core::Error| e.to_string())
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse().map_err(|e: pdmd_core::Error| e.to_string())
}

fn resolve(global: &GlobalArgs) -> anyhow::Result<(Common, FileConfig)> {
    let file = match &global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let common = Common {
        seed: global.seed.or(file.seed).unwrap_or(0),
        sv_floor: global.sv_floor.or(file.sv_floor).unwrap_or(0.0),
        oversample: global.oversample.or(file.oversample).unwrap_or(10),
        power_iters: global.power_iters.or(file.power_iters).unwrap_or(2),
        threads: global.threads.or(file.threads),
    };
    if !(common.sv_floor >= 0.0 && common.sv_floor < 1.0) {
        return Err(Usage(format!("--sv-floor must lie in [0, 1), got {}", common.sv_floor)).into());
    }
    if let Some(n) = common.threads {
        let n = std::num::NonZeroUsize::new(n).ok_or_else(|| Usage("--threads must be >= 1".into()))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.get()).build_global()?;
        pdmd_core::faer::set_global_parallelism(pdmd_core::faer::Par::rayon(n.get()));
    }
    Ok((common, file))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let (common, file) = resolve(&cli.global)?;
    let out = &cli.global.out;
    match cli.command {
        Command::Generate { preset, scale } => commands::generate::run(preset, scale, &common, out),
        Command::RankSweep {
            dataset,
            r_min,
            r_max,
            step,
            means,
        } => commands::sweep::run(&dataset, r_min, r_max, step, means, &common, out),
        Command::Pdmd {
            dataset,
            tol,
            save_reconstruction,
            save_models,
        } => {
            let flags = PdmdFlags {
                tol_bar: tol.tol_bar,
                tol: tol.tol,
                n_init: tol.n_init,
                dn: tol.dn,
                nu_star: tol.nu_star,
                rank_cap: tol.rank_cap,
                rank_rule: tol.rank_rule.map(Into::into),
            };
            let cfg = settings::pdmd_config(&common, &flags, &file);
            commands::pdmd::run(&dataset, &cfg, &common, save_reconstruction, save_models, out)
        }
        Command::Report { dir } => commands::report::run(&dir),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return EXIT_USAGE;
        }
        if cause.is::<NotConverged>() {
            return EXIT_NOT_CONVERGED;
        }
        if let Some(e) = cause.downcast_ref::<pdmd_core::Error>() {
            use pdmd_core::Error as E;
            return match e {
                E::Dimension(_) | E::Parameter(_) | E::PartitionTooFine { .. } => EXIT_USAGE,
                E::Io(_) | E::Json(_) | E::Format(_) | E::Truncated { .. } => EXIT_IO,
                E::Degenerate(_)
                | E::Spectral { .. }
                | E::Nonfinite(_)
                | E::PowerOverflow { .. }
                | E::BlowUp { .. }
                | E::ZeroNorm(_) => EXIT_NUMERICAL,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return EXIT_IO;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
