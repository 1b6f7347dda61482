use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// How the deformation parameter scales with `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Regime {
    /// `δ` fixed, `Re δ > -1/2`.
    FixedDelta(Complex64),
    /// `δ = β' d n`, `Re d > 0`.
    ScaledDelta(Complex64),
}

/// Size, inverse temperature and deformation of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub beta: f64,
    pub regime: Regime,
}

impl EnsembleParams {
    pub fn new(n: usize, beta: f64, regime: Regime) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta = {beta} must be positive")));
        }
        match regime {
            Regime::FixedDelta(d) if !(d.re > -0.5) || !d.im.is_finite() => {
                return Err(Error::InvalidParams(format!("fixed δ = {d} needs Re δ > -1/2")));
            }
            Regime::ScaledDelta(d) if !(d.re > 0.0) || !d.im.is_finite() => {
                return Err(Error::InvalidParams(format!("scaled d = {d} needs Re d > 0")));
            }
            _ => {}
        }
        Ok(EnsembleParams { n, beta, regime })
    }

    pub fn fixed(n: usize, beta: f64, delta: Complex64) -> Result<Self> {
        Self::new(n, beta, Regime::FixedDelta(delta))
    }

    pub fn scaled(n: usize, beta: f64, d: Complex64) -> Result<Self> {
        Self::new(n, beta, Regime::ScaledDelta(d))
    }

    pub fn beta_prime(&self) -> f64 {
        0.5 * self.beta
    }

    /// The deformation `δ` actually used by the coefficient laws.
    pub fn delta(&self) -> Complex64 {
        match self.regime {
            Regime::FixedDelta(d) => d,
            Regime::ScaledDelta(d) => d * (self.beta_prime() * self.n as f64),
        }
    }

    /// Rank weight of coefficient `j` (`0 <= j < n`); zero for the last one.
    pub fn rank_weight(&self, j: usize) -> f64 {
        self.beta_prime() * (self.n - j - 1) as f64
    }
}
