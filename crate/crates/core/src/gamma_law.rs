//! Exact facts about one deformed Verblunsky coefficient.
//!
//! For `r > 0` the coefficient lives on the unit disc with density
//! proportional to `(1-|z|²)^{r-1} (1-z)^{conj δ} (1-conj z)^δ`; for `r = 0`
//! it lives on the unit circle with density proportional to
//! `(1-z)^{conj δ} (1-conj z)^δ` with respect to `dθ`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{log_gamma, polygamma};

/// Law of a single coefficient: rank weight `r >= 0` and deformation `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientLaw {
    pub r: f64,
    pub delta: Complex64,
}

impl CoefficientLaw {
    pub fn new(r: f64, delta: Complex64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParams(format!("rank weight r = {r} must be >= 0")));
        }
        if !(r + 2.0 * delta.re + 1.0 > 0.0) || !delta.im.is_finite() {
            return Err(Error::InvalidParams(format!(
                "need r + 2 Re δ + 1 > 0 (r = {r}, δ = {delta})"
            )));
        }
        Ok(CoefficientLaw { r, delta })
    }

    pub fn is_circle(&self) -> bool {
        self.r == 0.0
    }

    /// `r + 1 + δ + conj δ`, always real.
    fn a_sum(&self) -> f64 {
        self.r + 1.0 + 2.0 * self.delta.re
    }

    /// `r + 1 + δ`.
    fn a_delta(&self) -> Complex64 {
        self.delta + self.r + 1.0
    }
}

/// Mean, covariance and fourth-moment bound of `log(1 - γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CumulantSet {
    pub mean: Complex64,
    /// Covariance of `(Re, Im) log(1 - γ)`.
    pub covariance: [[f64; 2]; 2],
    /// Upper bound on `E|A|⁴` with `A = log(1-γ) - E log(1-γ)`.
    pub fourth_bound: f64,
}

impl CumulantSet {
    pub fn covariance_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(
            self.covariance[0][0],
            self.covariance[0][1],
            self.covariance[1][0],
            self.covariance[1][1],
        )
    }
}

fn positive_re(op: &'static str, term: &str, z: Complex64) -> Result<()> {
    if z.re > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!("Gamma argument {term} = {z} needs positive real part"),
        ))
    }
}

/// `∫_𝔻 (1-|z|²)^{l-1} (1-z)^s (1-conj z)^t d²z
///   = π Γ(l) Γ(l+1+s+t) / (Γ(l+1+s) Γ(l+1+t))`.
pub fn disc_weight_integral(l: Complex64, s: Complex64, t: Complex64) -> Result<Complex64> {
    const OP: &str = "disc_weight_integral";
    positive_re(OP, "l", l)?;
    positive_re(OP, "l+1+s", l + 1.0 + s)?;
    positive_re(OP, "l+1+t", l + 1.0 + t)?;
    positive_re(OP, "l+1+s+t", l + 1.0 + s + t)?;
    let lg = log_gamma(l)? + log_gamma(l + 1.0 + s + t)?
        - log_gamma(l + 1.0 + s)?
        - log_gamma(l + 1.0 + t)?;
    Ok(lg.exp() * PI)
}

/// Normalizing constant of the coefficient density.
///
/// For `r = 0` the constant refers to the circle law with respect to `dθ`.
pub fn normalization_c(law: &CoefficientLaw) -> Result<f64> {
    let d = law.a_delta();
    let log_num = log_gamma(d)? + log_gamma(d.conj())?;
    if law.is_circle() {
        let v = log_num - log_gamma(Complex64::from(law.a_sum()))?;
        return Ok(v.re.exp() / (2.0 * PI));
    }
    let v = log_num - log_gamma(Complex64::from(law.r))? - log_gamma(Complex64::from(law.a_sum()))?;
    Ok(v.re.exp() / PI)
}

/// `E (1-γ)^a (1-conj γ)^b`.
pub fn mellin_fourier(law: &CoefficientLaw, a: Complex64, b: Complex64) -> Result<Complex64> {
    const OP: &str = "mellin_fourier";
    let sum = Complex64::from(law.a_sum());
    let d = law.a_delta();
    let top = [(sum + a + b, "r+1+δ+δ̄+a+b"), (d.conj(), "r+1+δ̄"), (d, "r+1+δ")];
    let bottom = [(sum, "r+1+δ+δ̄"), (d.conj() + a, "r+1+δ̄+a"), (d + b, "r+1+δ+b")];
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, name) in top {
        positive_re(OP, name, z)?;
        acc += log_gamma(z)?;
    }
    for (z, name) in bottom {
        positive_re(OP, name, z)?;
        acc -= log_gamma(z)?;
    }
    Ok(acc.exp())
}

/// `Λ(s,t) = log E exp(2s Re log(1-γ) + 2t Im log(1-γ))`.
pub fn cgf_lambda(law: &CoefficientLaw, s: f64, t: f64) -> Result<f64> {
    const OP: &str = "cgf_lambda";
    let sum = law.a_sum();
    let d = law.a_delta();
    let shift = Complex64::new(s, t);
    let terms = [
        (1.0, Complex64::from(sum + 2.0 * s), "r+1+δ+δ̄+2s"),
        (-1.0, Complex64::from(sum), "r+1+δ+δ̄"),
        (-1.0, d.conj() + shift.conj(), "r+1+δ̄+s-it"),
        (-1.0, d + shift, "r+1+δ+s+it"),
        (1.0, d.conj(), "r+1+δ̄"),
        (1.0, d, "r+1+δ"),
    ];
    let mut acc = 0.0;
    for (sign, z, name) in terms {
        positive_re(OP, name, z)?;
        acc += sign * log_gamma(z)?.re;
    }
    Ok(acc)
}

/// Mean, covariance and fourth-moment bound of `log(1 - γ)`.
pub fn cumulants(law: &CoefficientLaw) -> Result<CumulantSet> {
    let sum = Complex64::from(law.a_sum());
    let d = law.a_delta();
    let mean = polygamma(0, sum)? - polygamma(0, d.conj())?;
    let p1_sum = polygamma(1, sum)?.re;
    let p1_d = polygamma(1, d)?;
    let var_re = p1_sum - 0.5 * p1_d.re;
    let var_im = 0.5 * p1_d.re;
    let cov = 0.5 * p1_d.im;
    let p3_sum = polygamma(3, sum)?.re;
    let p3_d = polygamma(3, d)?;
    let kappa4_re = p3_sum - 0.125 * p3_d.re;
    let kappa4_im = -0.125 * p3_d.re;
    // E X⁴ = 3 Var² + κ₄ for each component, and |A|⁴ <= 8 (Re A)⁴ + 8 (Im A)⁴
    let fourth_bound = 8.0 * (3.0 * var_re * var_re + kappa4_re)
        + 8.0 * (3.0 * var_im * var_im + kappa4_im);
    Ok(CumulantSet {
        mean,
        covariance: [[var_re, cov], [cov, var_im]],
        fourth_bound,
    })
}
