//! Reaction terms `f(u, v)` and `g(u, v)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// FitzHugh-Nagumo: `f = [u(u - 0.1)(1 - u) - v + c] / d_u`, `g = b u - gamma v + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FhnParams {
    pub d_u: f64,
    pub b: f64,
    pub gamma: f64,
    pub c: f64,
}

impl Default for FhnParams {
    fn default() -> Self {
        Self {
            d_u: 0.015,
            b: 0.5,
            gamma: 2.0,
            c: 0.05,
        }
    }
}

/// Lambda-omega system with `lambda = 1 - (u^2 + v^2)` and `omega = -beta (u^2 + v^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaOmegaParams {
    pub rho: f64,
    pub beta: f64,
}

impl Default for LambdaOmegaParams {
    fn default() -> Self {
        Self { rho: 10.0, beta: 1.0 }
    }
}

/// DIB morphochemical model for electrodeposition.
///
/// `d` is always derived from `c`, `alpha` and `gamma` so that `(0, alpha)`
/// is an equilibrium; build values through [`DibParams::new`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DibParams {
    pub a1: f64,
    pub a2: f64,
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
    pub gamma: f64,
    pub k2: f64,
    pub k3: f64,
    pub rho: f64,
    pub d: f64,
}

impl DibParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a1: f64,
        a2: f64,
        alpha: f64,
        b: f64,
        c: f64,
        gamma: f64,
        k2: f64,
        k3: f64,
        rho: f64,
    ) -> Result<Self> {
        let d = derive_dib_d(c, alpha, gamma)?;
        let p = Self {
            a1,
            a2,
            alpha,
            b,
            c,
            gamma,
            k2,
            k3,
            rho,
            d,
        };
        let all = [a1, a2, alpha, b, c, gamma, k2, k3, rho, d];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("DIB parameters must be finite".into()));
        }
        Ok(p)
    }

    /// Turing regime on `[0, 20]^2`.
    pub fn turing() -> Self {
        Self::new(10.0, 1.0, 0.5, 66.0, 3.0, 0.2, 2.5, 1.5, 25.0 / 4.0).expect("valid parameters")
    }

    /// Turing-Hopf regime on `[0, 100] x [0, 70]`.
    pub fn turing_hopf() -> Self {
        Self::new(10.0, 30.0, 0.5, 109.0, 2.794, 0.2, 2.5, 1.5, 50.0).expect("valid parameters")
    }

    pub fn equilibrium(&self) -> (f64, f64) {
        (0.0, self.alpha)
    }
}

/// `D = C (1 - alpha)(1 - gamma + gamma alpha) / (alpha (1 + gamma alpha))`.
pub fn derive_dib_d(c: f64, alpha: f64, gamma: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let denom = alpha * (1.0 + gamma * alpha);
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Parameter(format!(
            "alpha (1 + gamma alpha) vanishes for alpha = {alpha}, gamma = {gamma}"
        )));
    }
    Ok(c * (1.0 - alpha) * (1.0 - gamma + gamma * alpha) / denom)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum Kinetics {
    /// `f = g = 0`, pure diffusion.
    Zero,
    Fhn(FhnParams),
    LambdaOmega(LambdaOmegaParams),
    Dib(DibParams),
}

impl Kinetics {
    pub fn eval(&self, u: f64, v: f64) -> (f64, f64) {
        kinetics_eval(self, u, v)
    }
}

pub fn kinetics_eval(kin: &Kinetics, u: f64, v: f64) -> (f64, f64) {
    match *kin {
        Kinetics::Zero => (0.0, 0.0),
        Kinetics::Fhn(p) => (
            (u * (u - 0.1) * (1.0 - u) - v + p.c) / p.d_u,
            p.b * u - p.gamma * v + p.c,
        ),
        Kinetics::LambdaOmega(p) => {
            let s = u * u + v * v;
            let lambda = 1.0 - s;
            let omega = -p.beta * s;
            (
                p.rho * (lambda * u - omega * v),
                p.rho * (omega * u + lambda * v),
            )
        }
        Kinetics::Dib(p) => {
            let f = p.rho * (p.a1 * (1.0 - v) * u - p.a2 * u * u * u - p.b * (v - p.alpha));
            let g = p.rho
                * (p.c * (1.0 + p.k2 * u) * (1.0 - v) * (1.0 - p.gamma * (1.0 - v))
                    - p.d * v * (1.0 + p.k3 * u) * (1.0 + p.gamma * v));
            (f, g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dib_d_values() {
        let d = derive_dib_d(3.0, 0.5, 0.2).unwrap();
        assert!((d - 1.35 / 0.55).abs() < 1e-15);
        let d = derive_dib_d(2.794, 0.5, 0.2).unwrap();
        assert!((d - 2.794 * 0.9 / 1.1).abs() < 1e-15);
        assert!((d - 2.286).abs() < 1e-12);
        let d = derive_dib_d(3.0, 0.25, 0.0).unwrap();
        assert!((d - 3.0 * 0.75 / 0.25).abs() < 1e-15);
        assert!(derive_dib_d(3.0, 0.0, 0.2).is_err());
        assert!(derive_dib_d(3.0, 0.5, -2.0).is_err());
    }

    #[test]
    fn dib_equilibrium() {
        for p in [DibParams::turing(), DibParams::turing_hopf()] {
            let (f, g) = kinetics_eval(&Kinetics::Dib(p), 0.0, p.alpha);
            assert!(f.abs() < 1e-14 && g.abs() < 1e-13, "{f} {g}");
        }
    }

    #[test]
    fn lambda_omega_on_unit_circle() {
        let (f, g) = kinetics_eval(&Kinetics::LambdaOmega(LambdaOmegaParams::default()), 1.0, 0.0);
        assert_eq!(f, 0.0);
        assert_eq!(g, -10.0);
    }

    #[test]
    fn fhn_at_origin() {
        let (f, g) = kinetics_eval(&Kinetics::Fhn(FhnParams::default()), 0.0, 0.0);
        assert!((f - 10.0 / 3.0).abs() < 1e-14);
        assert_eq!(g, 0.05);
    }
}
