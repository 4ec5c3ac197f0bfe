//! Dynamic mode decomposition for reaction-diffusion snapshot data.
//!
//! * [`dmd`]: exact DMD, reconstruction and the Frobenius error.
//! * [`qb`]: randomized QB factorization and randomized DMD.
//! * [`pdmd`]: piecewise DMD with partition refinement.
//! * [`rdpde`]: IMEX Euler solvers and the named test problems.
//! * [`snapshots`]: snapshot matrices, windows and the PDMD1 file format.

pub mod dmd;
pub mod error;
pub mod linalg;
pub mod model_io;
pub mod pdmd;
pub mod qb;
pub mod rdpde;
pub mod seed;
pub mod snapshots;

pub use dmd::{exact_dmd, frob_error, reconstruct, DmdModel, Reconstruction, SplitPair, TruncatedSvd};
pub use error::{Error, Result};
pub use pdmd::{pdmd_converge, pdmd_pass, Convergence, PassStatus, PdmdConfig, PdmdResult, RankRule, TraceRow};
pub use qb::{qb_decompose, randomized_dmd, QbConfig, QbFactor};
pub use rdpde::{preset, simulate, Kinetics, Preset, RdpdeProblem, Scale};
pub use snapshots::{partition, stack_coupled, ColumnWindow, Field, Layout, SnapshotMatrix, TimeGrid, WindowView};

pub use faer;
pub use faer::c64;
