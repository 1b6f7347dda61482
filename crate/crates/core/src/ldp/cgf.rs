//! Cumulant generating functions `𝓛_0`, `𝓛_d`, the path functional `Λ_0`
//! and the closed forms at `T = 1`.

use std::cell::Cell;

use num_complex::Complex64;

use super::rate::{lagrangian_unchecked, rate_ha};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::quad::tanh_sinh;
use crate::specfun::entropy::{f, fc, jc};

pub(crate) fn check_horizon(op: &'static str, horizon: f64) -> Result<()> {
    if horizon > 0.0 && horizon <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("T = {horizon} must lie in (0, 1]")))
    }
}

/// `𝒥(a) - 𝒥(b)` for `a > b >= 0`, written to survive large arguments.
pub(crate) fn jdiff(a: f64, b: f64) -> f64 {
    let gap = a - b;
    let tail = if b == 0.0 { 0.0 } else { b * (gap / b).ln_1p() };
    gap * a.ln() + tail - gap
}

/// `𝓛_0(T, s, t)` from the eight-term combination of `F`, with `2z = s + it`.
pub fn cgf_l0(horizon: f64, s: f64, t: f64) -> Result<f64> {
    const OP: &str = "cgf_l0";
    check_horizon(OP, horizon)?;
    let lo = -(1.0 - horizon);
    if !(s >= lo) || !t.is_finite() || !s.is_finite() {
        return Err(Error::domain(OP, format!("s = {s} must be at least -(1-T) = {lo}")));
    }
    Ok(l0(horizon, s, t))
}

pub(crate) fn l0(horizon: f64, s: f64, t: f64) -> f64 {
    let c = 1.0 - horizon;
    let real = f(1.0 + s) - f(c + s) + f(1.0) - f(c);
    if t == 0.0 {
        let z = 0.5 * s;
        return real - 2.0 * (f(1.0 + z) - f(c + z));
    }
    let z = Complex64::new(0.5 * s, 0.5 * t);
    real - 2.0 * (fc(z + 1.0) - fc(z + c)).re
}

/// `𝓛_d(T, s, t) = 𝓛_0(T, s + 2Re d, t + 2Im d) - 𝓛_0(T, 2Re d, 2Im d)`.
pub fn cgf_ld(horizon: f64, s: f64, t: f64, d: Complex64) -> Result<f64> {
    const OP: &str = "cgf_ld";
    check_horizon(OP, horizon)?;
    if d.re < 0.0 {
        return Err(Error::domain(OP, format!("Re d = {} must be non-negative", d.re)));
    }
    let lo = -(1.0 - horizon) - 2.0 * d.re;
    if !(s >= lo) || !t.is_finite() {
        return Err(Error::domain(OP, format!("s = {s} must be at least {lo}")));
    }
    Ok(l0(horizon, s + 2.0 * d.re, t + 2.0 * d.im) - l0(horizon, 2.0 * d.re, 2.0 * d.im))
}

/// `𝒞_d(T) = -𝓛_0(T, 2Re d, 2Im d)`.
pub fn constant_c(d: Complex64, horizon: f64) -> Result<f64> {
    check_horizon("constant_c", horizon)?;
    if d.re < 0.0 {
        return Err(Error::domain("constant_c", "Re d must be non-negative"));
    }
    Ok(-l0(horizon, 2.0 * d.re, 2.0 * d.im))
}

/// Gradient of `𝓛_0` in `(s, t)`.
pub fn cgf_l0_gradient(horizon: f64, s: f64, t: f64) -> Result<[f64; 2]> {
    cgf_l0(horizon, s, t)?;
    Ok(l0_gradient(horizon, s, t))
}

pub(crate) fn l0_gradient(horizon: f64, s: f64, t: f64) -> [f64; 2] {
    let c = 1.0 - horizon;
    if t == 0.0 {
        return [jdiff(1.0 + s, c + s) - jdiff(1.0 + 0.5 * s, c + 0.5 * s), 0.0];
    }
    let z = Complex64::new(0.5 * s, 0.5 * t);
    let a = jc(z + 1.0) - jc(z + c);
    [jdiff(1.0 + s, c + s) - a.re, a.im]
}

/// Hessian of `𝓛_0` in `(s, t)`; requires `s > -(1-T)`.
pub fn cgf_l0_hessian(horizon: f64, s: f64, t: f64) -> Result<[[f64; 2]; 2]> {
    cgf_l0(horizon, s, t)?;
    if s == -(1.0 - horizon) {
        return Err(Error::domain("cgf_l0_hessian", "Hessian blows up on the boundary s = -(1-T)"));
    }
    Ok(l0_hessian(horizon, s, t))
}

pub(crate) fn l0_hessian(horizon: f64, s: f64, t: f64) -> [[f64; 2]; 2] {
    let c = 1.0 - horizon;
    let z = Complex64::new(0.5 * s, 0.5 * t);
    let b = (z + 1.0).ln() - (z + c).ln();
    let hss = (horizon / (c + s)).ln_1p() - 0.5 * b.re;
    [[hss, 0.5 * b.im], [0.5 * b.im, 0.5 * b.re]]
}

/// `Λ_0(T, x, y) = ∫₀ᵀ (1-τ) L(X(τ), Y(τ)) dτ` for time-changed paths `X`, `Y`.
pub fn path_functional_lambda0<FX, FY>(horizon: f64, x: FX, y: FY) -> Result<f64>
where
    FX: Fn(f64) -> f64,
    FY: Fn(f64) -> f64,
{
    lambda0_inner(horizon, |tau, u| {
        let xv = x(tau);
        (xv, u * lagrangian_unchecked(xv, y(tau)))
    })
}

/// `Λ_0` for paths given in the original clock, `X(τ) = x(τ)/(1-τ)`.
pub fn path_functional_xy<FX, FY>(horizon: f64, x: FX, y: FY) -> Result<f64>
where
    FX: Fn(f64) -> f64,
    FY: Fn(f64) -> f64,
{
    // (1-τ) L(x/(1-τ), y/(1-τ)) written out, finite up to τ = 1
    lambda0_inner(horizon, |tau, u| {
        let (xv, yv) = (x(tau), y(tau));
        let a = u + xv;
        let h = u + 0.5 * xv;
        let v = a * a.ln() + yv * (yv / (2.0 * u + xv)).atan() - h * (h * h + 0.25 * yv * yv).ln() + u * u.ln();
        (xv / u, v)
    })
}

// `g(τ, 1-τ)` returns `(X(τ), integrand)`; `1-τ` is passed without cancellation.
fn lambda0_inner<G>(horizon: f64, g: G) -> Result<f64>
where
    G: Fn(f64, f64) -> (f64, f64),
{
    const OP: &str = "path_functional_lambda0";
    check_horizon(OP, horizon)?;
    let bad = Cell::new(None);
    let est = tanh_sinh(
        |tau: f64, _: f64, db: f64| {
            let (xv, v) = g(tau, (1.0 - horizon) + db);
            if !(xv > -1.0) || !v.is_finite() {
                bad.set(Some((tau, xv)));
                return 0.0;
            }
            v
        },
        0.0,
        horizon,
        1e-13,
    )?;
    if let Some((tau, xv)) = bad.get() {
        return Err(Error::domain(OP, format!("X({tau}) = {xv}: integrand undefined")));
    }
    Ok(est.value)
}

/// A point mass of the singular part of `φ̇`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularAtom {
    pub location: f64,
    pub mass: f64,
}

/// The action `𝓗_0(T, φ, ψ)` of a path with absolutely continuous derivatives
/// `φ̇_a`, `ψ̇_a` and singular `φ̇` atoms. Positive atoms make it infinite.
pub fn path_action_h0<FP, FQ>(horizon: f64, phi_dot: FP, psi_dot: FQ, atoms: &[SingularAtom]) -> Result<ExtendedReal>
where
    FP: Fn(f64) -> f64,
    FQ: Fn(f64) -> f64,
{
    check_horizon("path_action_h0", horizon)?;
    let mut singular = 0.0;
    for a in atoms {
        if !(0.0..=horizon).contains(&a.location) {
            return Err(Error::domain("path_action_h0", format!("atom at {} outside [0, T]", a.location)));
        }
        if a.mass > 0.0 {
            return Ok(ExtendedReal::PosInfinity);
        }
        singular += (1.0 - a.location) * (-a.mass);
    }
    let infinite = Cell::new(false);
    let est = tanh_sinh(
        |tau: f64, _: f64, _: f64| match rate_ha(phi_dot(tau), psi_dot(tau)) {
            ExtendedReal::Finite(v) => (1.0 - tau) * v,
            ExtendedReal::PosInfinity => {
                infinite.set(true);
                0.0
            }
        },
        0.0,
        horizon,
        1e-13,
    )?;
    if infinite.get() {
        return Ok(ExtendedReal::PosInfinity);
    }
    Ok(ExtendedReal::Finite(est.value + singular))
}

/// Chernov exponent `θ(a - 2T log 2) + 𝓛_d(T, θ, 0)` for `θ ∈ (-(1-T) - 2Re d, 0)`.
pub fn chernov_bound(horizon: f64, d: Complex64, theta: f64, a: f64) -> Result<f64> {
    let lo = -(1.0 - horizon) - 2.0 * d.re;
    if !(theta > lo && theta < 0.0) {
        return Err(Error::domain("chernov_bound", format!("θ = {theta} outside ({lo}, 0)")));
    }
    Ok(theta * (a - 2.0 * horizon * std::f64::consts::LN_2) + cgf_ld(horizon, theta, 0.0, d)?)
}

/// Which closed form to evaluate at `T = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HkocForm {
    Real,
    Imag,
}

/// `(1+s)²/2 log(1+s) - (1+s/2)² log(1+s/2) - s²/4 log(2s)`, `s >= 0`.
pub fn hkoc_real(s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::domain("hkoc_real", format!("s = {s} must be non-negative")));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let h = 1.0 + 0.5 * s;
    Ok(0.5 * (1.0 + s).powi(2) * s.ln_1p() - h * h * (0.5 * s).ln_1p() - 0.25 * s * s * (2.0 * s).ln())
}

/// `t²/8 log(1 + 4/t²) - ½ log(1 + t²/4) + t arctan(t/2)`.
pub fn hkoc_imag(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::domain("hkoc_imag", "t must be finite"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let t2 = t * t;
    Ok(t2 / 8.0 * (4.0 / t2).ln_1p() - 0.5 * (0.25 * t2).ln_1p() + t * (0.5 * t).atan())
}

pub fn hkoc_forms(which: HkocForm, arg: f64) -> Result<f64> {
    match which {
        HkocForm::Real => hkoc_real(arg),
        HkocForm::Imag => hkoc_imag(arg),
    }
}
