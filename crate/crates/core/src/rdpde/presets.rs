//! The four named test problems at full and reduced resolution.
//!
//! | preset | scale | grid | domain | h_t | T | kappa | snapshots |
//! |--------|-------|------|--------|-----|---|-------|-----------|
//! | `fhn` | full | 1024 | [0, 1] | 1e-3 | 6 | 1 | 6000 |
//! | `fhn` | desk | 256 | [0, 1] | 1e-3 | 6 | 1 | 6000 |
//! | `lambda_omega` | full | 99 x 99 | [0, 130]^2 | 1e-3 | 50 | 4 | 12500 |
//! | `lambda_omega` | desk | 64 x 64 | [0, 130]^2 | 1e-3 | 50 | 8 | 6250 |
//! | `dib_turing` | full | 100 x 100 | [0, 20]^2 | 1e-3 | 40 | 4 | 10000 |
//! | `dib_turing` | desk | 64 x 64 | [0, 20]^2 | 1e-3 | 40 | 16 | 2500 |
//! | `dib_turing_hopf` | full | 100 x 100 | [0, 100] x [0, 70] | 1e-4 | 4.5 | 4 | 11250 |
//! | `dib_turing_hopf` | desk | 64 x 64 | [0, 100] x [0, 70] | 2e-4 | 4.5 | 2 | 11250 |

use super::{
    Boundary, DibParams, Diffusion, Domain, FhnParams, Grid, InitialCondition, Kinetics,
    LambdaOmegaParams, PulseFlux, RdpdeProblem,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fhn,
    LambdaOmega,
    DibTuring,
    DibTuringHopf,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Fhn,
        Preset::LambdaOmega,
        Preset::DibTuring,
        Preset::DibTuringHopf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fhn => "fhn",
            Preset::LambdaOmega => "lambda_omega",
            Preset::DibTuring => "dib_turing",
            Preset::DibTuringHopf => "dib_turing_hopf",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown preset `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Full,
    Desk,
}

impl Scale {
    pub fn name(&self) -> &'static str {
        match self {
            Scale::Full => "full",
            Scale::Desk => "desk",
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Scale::Full),
            "desk" => Ok(Scale::Desk),
            _ => Err(Error::Parameter(format!("unknown scale `{s}`"))),
        }
    }
}

/// Build a named problem. `seed` only affects the DIB initial perturbation.
pub fn preset(name: Preset, scale: Scale, seed: u64) -> RdpdeProblem {
    let full = scale == Scale::Full;
    let name_str = format!("{}_{}", name.name(), scale.name());
    match name {
        Preset::Fhn => {
            let p = FhnParams::default();
            RdpdeProblem {
                name: name_str,
                kinetics: Kinetics::Fhn(p),
                domain: Domain::Interval { length: 1.0 },
                grid: Grid::Line {
                    n: if full { 1024 } else { 256 },
                },
                diffusion: Diffusion { d_u: p.d_u, d_v: 0.0 },
                bc: Boundary::LeftFlux(PulseFlux {
                    amplitude: 5e4,
                    rate: 15.0,
                }),
                ic: InitialCondition::Constant { u: 0.0, v: 0.0 },
                h_t: 1e-3,
                t_final: 6.0,
                kappa: 1,
            }
        }
        Preset::LambdaOmega => {
            let n = if full { 99 } else { 64 };
            RdpdeProblem {
                name: name_str,
                kinetics: Kinetics::LambdaOmega(LambdaOmegaParams::default()),
                domain: Domain::Rectangle { lx: 130.0, ly: 130.0 },
                grid: Grid::Plane { nx: n, ny: n },
                diffusion: Diffusion { d_u: 4.0, d_v: 4.0 },
                bc: Boundary::Neumann,
                ic: InitialCondition::Ramp { length: 130.0 },
                h_t: 1e-3,
                t_final: 50.0,
                kappa: if full { 4 } else { 8 },
            }
        }
        Preset::DibTuring => {
            let p = DibParams::turing();
            let n = if full { 100 } else { 64 };
            RdpdeProblem {
                name: name_str,
                kinetics: Kinetics::Dib(p),
                domain: Domain::Rectangle { lx: 20.0, ly: 20.0 },
                grid: Grid::Plane { nx: n, ny: n },
                diffusion: Diffusion { d_u: 1.0, d_v: 20.0 },
                bc: Boundary::Neumann,
                ic: dib_ic(&p, seed),
                h_t: 1e-3,
                t_final: 40.0,
                kappa: if full { 4 } else { 16 },
            }
        }
        Preset::DibTuringHopf => {
            let p = DibParams::turing_hopf();
            let n = if full { 100 } else { 64 };
            RdpdeProblem {
                name: name_str,
                kinetics: Kinetics::Dib(p),
                domain: Domain::Rectangle { lx: 100.0, ly: 70.0 },
                grid: Grid::Plane { nx: n, ny: n },
                diffusion: Diffusion { d_u: 1.0, d_v: 20.0 },
                bc: Boundary::Neumann,
                ic: dib_ic(&p, seed),
                h_t: if full { 1e-4 } else { 2e-4 },
                t_final: 4.5,
                kappa: if full { 4 } else { 2 },
            }
        }
    }
}

fn dib_ic(p: &DibParams, seed: u64) -> InitialCondition {
    let (u_e, v_e) = p.equilibrium();
    InitialCondition::Perturbed {
        u_e,
        v_e,
        amplitude: 1e-5,
        seed,
    }
}
