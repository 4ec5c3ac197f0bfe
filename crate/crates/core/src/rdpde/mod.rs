//! Two-species reaction-diffusion solvers and the named test problems.
//!
//! Diffusion is treated implicitly and the reaction terms explicitly (IMEX
//! Euler). In 1D the implicit step is a tridiagonal solve; in 2D it is a
//! Sylvester equation solved in the eigenbasis of the 1D Laplacians.

mod kinetics;
mod laplacian;
mod presets;

pub use kinetics::{derive_dib_d, kinetics_eval, DibParams, FhnParams, Kinetics, LambdaOmegaParams};
pub use laplacian::{neumann_laplacian_1d, neumann_spectrum, ImplicitTridiag, NeumannSpectrum};
pub use presets::{preset, Preset, Scale};

use crate::error::{Error, Result};
use crate::seed::Stream;
use crate::snapshots::{Layout, SnapshotMatrix, TimeGrid};
use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Domain {
    Interval { length: f64 },
    Rectangle { lx: f64, ly: f64 },
}

/// Number of nodes per direction, boundary nodes included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Grid {
    Line { n: usize },
    Plane { nx: usize, ny: usize },
}

impl Grid {
    pub fn nodes(&self) -> usize {
        match *self {
            Grid::Line { n } => n,
            Grid::Plane { nx, ny } => nx * ny,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diffusion {
    pub d_u: f64,
    pub d_v: f64,
}

/// Left-boundary flux `u_x(0, t) = -amplitude t^3 exp(-rate t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseFlux {
    pub amplitude: f64,
    pub rate: f64,
}

impl PulseFlux {
    pub fn value(&self, t: f64) -> f64 {
        -self.amplitude * t.powi(3) * (-self.rate * t).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Boundary {
    /// Zero normal derivative for both species.
    Neumann,
    /// Prescribed `u_x` at `x = 0` (1D only), homogeneous elsewhere.
    LeftFlux(PulseFlux),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialCondition {
    Constant { u: f64, v: f64 },
    /// `u = (x - L/2) / 10`, `v = (-y/2 + L/4) / 10` on a square of side `L`.
    Ramp { length: f64 },
    /// `(u_e, v_e)` plus `amplitude * U(0, 1)` noise on every node, u first.
    Perturbed {
        u_e: f64,
        v_e: f64,
        amplitude: f64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RdpdeProblem {
    pub name: String,
    pub kinetics: Kinetics,
    pub domain: Domain,
    pub grid: Grid,
    pub diffusion: Diffusion,
    pub bc: Boundary,
    pub ic: InitialCondition,
    pub h_t: f64,
    pub t_final: f64,
    pub kappa: usize,
}

impl RdpdeProblem {
    /// `round(T / h_t)`.
    pub fn steps(&self) -> usize {
        (self.t_final / self.h_t).round() as usize
    }

    /// Stored snapshots: the state after every `kappa` steps.
    pub fn snapshot_count(&self) -> usize {
        self.steps() / self.kappa.max(1)
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        let dt = self.kappa as f64 * self.h_t;
        TimeGrid::new(dt, dt, self.snapshot_count())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h_t > 0.0) || !self.h_t.is_finite() {
            return Err(Error::Parameter(format!("h_t must be > 0, got {}", self.h_t)));
        }
        if !(self.t_final > self.h_t) || !self.t_final.is_finite() {
            return Err(Error::Parameter(format!(
                "T = {} must exceed h_t = {}",
                self.t_final, self.h_t
            )));
        }
        if self.kappa == 0 {
            return Err(Error::Parameter("kappa must be >= 1".into()));
        }
        if self.steps() % self.kappa != 0 {
            return Err(Error::Parameter(format!(
                "kappa = {} does not divide the {} time steps",
                self.kappa,
                self.steps()
            )));
        }
        if self.snapshot_count() < 2 {
            return Err(Error::Parameter("fewer than 2 stored snapshots".into()));
        }
        if !(self.diffusion.d_u >= 0.0 && self.diffusion.d_v >= 0.0) {
            return Err(Error::Parameter("diffusion coefficients must be >= 0".into()));
        }
        match (self.domain, self.grid) {
            (Domain::Interval { length }, Grid::Line { n }) => {
                if !(length > 0.0) || n < 3 {
                    return Err(Error::Parameter("interval needs length > 0 and n >= 3".into()));
                }
            }
            (Domain::Rectangle { lx, ly }, Grid::Plane { nx, ny }) => {
                if !(lx > 0.0 && ly > 0.0) || nx < 3 || ny < 3 {
                    return Err(Error::Parameter(
                        "rectangle needs positive sides and at least 3 nodes per direction".into(),
                    ));
                }
                if matches!(self.bc, Boundary::LeftFlux(_)) {
                    return Err(Error::Parameter("flux boundary data is 1D only".into()));
                }
            }
            _ => {
                return Err(Error::Parameter("domain and grid dimensions differ".into()));
            }
        }
        Ok(())
    }

    fn initial_state(&self) -> (Vec<f64>, Vec<f64>) {
        let nodes = self.grid.nodes();
        match self.ic {
            InitialCondition::Constant { u, v } => (vec![u; nodes], vec![v; nodes]),
            InitialCondition::Ramp { length } => {
                let (nx, ny, hx, hy) = self.plane_spacing();
                let mut u = vec![0.0; nodes];
                let mut v = vec![0.0; nodes];
                for j in 0..ny {
                    for i in 0..nx {
                        let x = i as f64 * hx;
                        let y = j as f64 * hy;
                        u[i + nx * j] = (x - length / 2.0) / 10.0;
                        v[i + nx * j] = (-y / 2.0 + length / 4.0) / 10.0;
                    }
                }
                (u, v)
            }
            InitialCondition::Perturbed {
                u_e,
                v_e,
                amplitude,
                seed,
            } => {
                let mut s = Stream::new(seed);
                let u = (0..nodes).map(|_| u_e + amplitude * s.uniform()).collect();
                let v = (0..nodes).map(|_| v_e + amplitude * s.uniform()).collect();
                (u, v)
            }
        }
    }

    /// `(nx, ny, hx, hy)`; a line is treated as `ny = 1`.
    fn plane_spacing(&self) -> (usize, usize, f64, f64) {
        match (self.domain, self.grid) {
            (Domain::Rectangle { lx, ly }, Grid::Plane { nx, ny }) => {
                (nx, ny, lx / (nx - 1) as f64, ly / (ny - 1) as f64)
            }
            (Domain::Interval { length }, Grid::Line { n }) => (n, 1, length / (n - 1) as f64, 1.0),
            _ => unreachable!("validated"),
        }
    }
}

/// Run the problem and return the stacked `[u; v]` snapshots.
pub fn simulate(problem: &RdpdeProblem) -> Result<SnapshotMatrix> {
    match problem.grid {
        Grid::Line { .. } => imex_euler_1d(problem),
        Grid::Plane { .. } => imex_euler_2d(problem),
    }
}

struct Recorder {
    data: Mat<f64>,
    n: usize,
    kappa: usize,
    next: usize,
}

impl Recorder {
    fn new(n: usize, count: usize, kappa: usize) -> Self {
        Self {
            data: Mat::zeros(2 * n, count),
            n,
            kappa,
            next: 0,
        }
    }

    fn after_step(&mut self, step: usize, u: &[f64], v: &[f64]) {
        if (step + 1) % self.kappa == 0 && self.next < self.data.ncols() {
            let j = self.next;
            for i in 0..self.n {
                self.data[(i, j)] = u[i];
                self.data[(self.n + i, j)] = v[i];
            }
            self.next += 1;
        }
    }

    fn finish(self, grid: TimeGrid) -> Result<SnapshotMatrix> {
        SnapshotMatrix::new(self.data, grid, Layout::Coupled(self.n))
    }
}

fn check_finite(step: usize, h_t: f64, u: &[f64], v: &[f64]) -> Result<()> {
    if u.iter().chain(v.iter()).all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::BlowUp {
            step: step + 1,
            time: (step + 1) as f64 * h_t,
        })
    }
}

/// IMEX Euler on an interval: tridiagonal implicit diffusion, explicit
/// kinetics, optional flux data at the left end evaluated at the start of
/// each step.
pub fn imex_euler_1d(problem: &RdpdeProblem) -> Result<SnapshotMatrix> {
    problem.validate()?;
    let (n, length) = match (problem.grid, problem.domain) {
        (Grid::Line { n }, Domain::Interval { length }) => (n, length),
        _ => return Err(Error::Parameter("imex_euler_1d needs a 1D problem".into())),
    };
    let h = length / (n - 1) as f64;
    let h_t = problem.h_t;
    let Diffusion { d_u, d_v } = problem.diffusion;
    let solve_u = ImplicitTridiag::new(n, h, h_t * d_u)?;
    let solve_v = if d_v > 0.0 {
        Some(ImplicitTridiag::new(n, h, h_t * d_v)?)
    } else {
        None
    };
    let grid = problem.time_grid()?;
    let (mut u, mut v) = problem.initial_state();
    let mut rec = Recorder::new(n, grid.count, problem.kappa);
    let mut fu = vec![0.0; n];
    let mut fv = vec![0.0; n];
    for step in 0..problem.steps() {
        let t = step as f64 * h_t;
        for i in 0..n {
            let (f, g) = problem.kinetics.eval(u[i], v[i]);
            fu[i] = u[i] + h_t * f;
            fv[i] = v[i] + h_t * g;
        }
        if let Boundary::LeftFlux(flux) = problem.bc {
            fu[0] -= 2.0 * h_t * d_u * flux.value(t) / h;
        }
        solve_u.solve(&mut fu);
        if let Some(sv) = &solve_v {
            sv.solve(&mut fv);
        }
        std::mem::swap(&mut u, &mut fu);
        std::mem::swap(&mut v, &mut fv);
        check_finite(step, h_t, &u, &v)?;
        rec.after_step(step, &u, &v);
    }
    rec.finish(grid)
}

/// Implicit diffusion step `X - a (L_x X + X L_y^T) = R` through the
/// eigenbases of `L_x` and `L_y`.
#[derive(Clone, Debug)]
pub struct SylvesterStepper {
    px: Mat<f64>,
    px_inv: Mat<f64>,
    py_t: Mat<f64>,
    py_inv_t: Mat<f64>,
    denom: Mat<f64>,
}

impl SylvesterStepper {
    /// `a = h_t d` for a node grid of `nx x ny` with spacings `hx`, `hy`.
    pub fn new(nx: usize, ny: usize, hx: f64, hy: f64, a: f64) -> Result<Self> {
        let sx = neumann_spectrum(nx, hx)?;
        let sy = neumann_spectrum(ny, hy)?;
        let denom = Mat::from_fn(nx, ny, |i, j| 1.0 - a * (sx.eigvals[i] + sy.eigvals[j]));
        Ok(Self {
            px: sx.vectors,
            px_inv: sx.inverse,
            py_t: sy.vectors.transpose().to_owned(),
            py_inv_t: sy.inverse.transpose().to_owned(),
            denom,
        })
    }

    pub fn solve(&self, rhs: MatRef<'_, f64>) -> Mat<f64> {
        let mut hat = &self.px_inv * rhs * &self.py_inv_t;
        for j in 0..hat.ncols() {
            for i in 0..hat.nrows() {
                hat[(i, j)] /= self.denom[(i, j)];
            }
        }
        &self.px * hat * &self.py_t
    }
}

/// IMEX Euler on a rectangle with homogeneous Neumann data. States are
/// `nx x ny` matrices stored column-major, node `(i, j)` at row `i + nx j`.
pub fn imex_euler_2d(problem: &RdpdeProblem) -> Result<SnapshotMatrix> {
    problem.validate()?;
    if !matches!(problem.grid, Grid::Plane { .. }) {
        return Err(Error::Parameter("imex_euler_2d needs a 2D problem".into()));
    }
    let (nx, ny, hx, hy) = problem.plane_spacing();
    let h_t = problem.h_t;
    let Diffusion { d_u, d_v } = problem.diffusion;
    let step_u = SylvesterStepper::new(nx, ny, hx, hy, h_t * d_u)?;
    let step_v = SylvesterStepper::new(nx, ny, hx, hy, h_t * d_v)?;
    let grid = problem.time_grid()?;
    let (u0, v0) = problem.initial_state();
    let mut u = Mat::from_fn(nx, ny, |i, j| u0[i + nx * j]);
    let mut v = Mat::from_fn(nx, ny, |i, j| v0[i + nx * j]);
    let n = nx * ny;
    let mut rec = Recorder::new(n, grid.count, problem.kappa);
    let mut ru = Mat::<f64>::zeros(nx, ny);
    let mut rv = Mat::<f64>::zeros(nx, ny);
    let mut flat_u = vec![0.0; n];
    let mut flat_v = vec![0.0; n];
    for step in 0..problem.steps() {
        for j in 0..ny {
            for i in 0..nx {
                let (f, g) = problem.kinetics.eval(u[(i, j)], v[(i, j)]);
                ru[(i, j)] = u[(i, j)] + h_t * f;
                rv[(i, j)] = v[(i, j)] + h_t * g;
            }
        }
        u = step_u.solve(ru.as_ref());
        v = step_v.solve(rv.as_ref());
        for j in 0..ny {
            for i in 0..nx {
                flat_u[i + nx * j] = u[(i, j)];
                flat_v[i + nx * j] = v[(i, j)];
            }
        }
        check_finite(step, h_t, &flat_u, &flat_v)?;
        rec.after_step(step, &flat_u, &flat_v);
    }
    rec.finish(grid)
}
