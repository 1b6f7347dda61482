//! Equilibrium measures on the circle and the line, logarithmic energies and
//! the spectral rate `I_d`.

use std::f64::consts::{LN_2, PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{sinh_sinh, tanh_sinh};
use crate::specfun::entropy::{f, fc, j};

const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasureDomain {
    /// Angles in `[0, 2π]`.
    Circle,
    /// Points of the real line.
    Line,
}

type Density = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// An absolutely continuous probability measure on an interval, possibly with atoms.
///
/// The density is called as `density(x, x - lo, hi - x)` so that it can
/// resolve square-root endpoint behaviour without cancellation.
#[derive(Clone)]
pub struct RadonMeasure1D {
    density: Density,
    pub support: (f64, f64),
    pub domain: MeasureDomain,
    /// Power-law exponents of the density at the two ends of the support.
    pub endpoint_exponents: (f64, f64),
    /// `(location, mass)` pairs.
    pub atoms: Vec<(f64, f64)>,
}

impl std::fmt::Debug for RadonMeasure1D {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("RadonMeasure1D")
            .field("support", &self.support)
            .field("domain", &self.domain)
            .field("endpoint_exponents", &self.endpoint_exponents)
            .field("atoms", &self.atoms)
            .finish()
    }
}

impl RadonMeasure1D {
    pub fn new<D>(density: D, support: (f64, f64), domain: MeasureDomain, endpoint_exponents: (f64, f64)) -> Self
    where
        D: Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    {
        RadonMeasure1D {
            density: Arc::new(density),
            support,
            domain,
            endpoint_exponents,
            atoms: Vec::new(),
        }
    }

    /// Uniform probability measure on the circle.
    pub fn uniform_circle() -> Self {
        Self::new(|_, _, _| 1.0 / TAU, (0.0, TAU), MeasureDomain::Circle, (0.0, 0.0))
    }

    /// Density at `x`, zero off the support.
    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if x < lo || x > hi {
            return 0.0;
        }
        (self.density)(x, x - lo, hi - x)
    }

    /// `∫ g dμ` over the absolutely continuous part plus the atoms.
    pub fn integrate<G>(&self, g: G) -> Result<f64>
    where
        G: Fn(f64) -> f64,
    {
        self.integrate_with(|x, _, _| g(x))
    }

    /// As [`integrate`](Self::integrate), with `g` also receiving the distances to both ends.
    pub fn integrate_with<G>(&self, g: G) -> Result<f64>
    where
        G: Fn(f64, f64, f64) -> f64,
    {
        let (lo, hi) = self.support;
        let ac = tanh_sinh(|x, da, db| g(x, da, db) * (self.density)(x, da, db), lo, hi, QUAD_TOL)?.value;
        let (lo, hi) = self.support;
        let point: f64 = self.atoms.iter().map(|&(x, m)| m * g(x, x - lo, hi - x)).sum();
        Ok(ac + point)
    }

    pub fn mass(&self) -> Result<f64> {
        self.integrate(|_| 1.0)
    }

    /// `n` equally spaced `(x, density)` rows across the support.
    pub fn density_table(&self, n: usize) -> Vec<(f64, f64)> {
        let (lo, hi) = self.support;
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let x = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                (x, self.density(x))
            })
            .collect()
    }
}

/// `θ_a = 2 arcsin(a/(1+a))`.
pub fn theta_a(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("theta_a", format!("a = {a} must be positive")));
    }
    Ok(2.0 * (a / (1.0 + a)).asin())
}

/// The measure `μ_a` on the arc `[θ_a, 2π - θ_a]`.
pub fn mu_a_measure(a: f64) -> Result<RadonMeasure1D> {
    let th = theta_a(a)?;
    let sa = a / (1.0 + a);
    let density = move |theta: f64, da: f64, db: f64| {
        let s = (0.5 * theta).sin();
        // sin(θ/2) - sin(θ_a/2) from the distance to the nearer endpoint
        let gap = if da <= db {
            2.0 * (0.25 * (theta + th)).cos() * (0.25 * da).sin()
        } else {
            2.0 * (0.25 * (TAU - theta + th)).cos() * (0.25 * db).sin()
        };
        let prod = (gap * (s + sa)).max(0.0);
        (1.0 + a) * prod.sqrt() / (TAU * s)
    };
    Ok(RadonMeasure1D::new(density, (th, TAU - th), MeasureDomain::Circle, (0.5, 0.5)))
}

/// `log(2 sin(θ/2))` for `θ ∈ (0, 2π)`, given the distances to `0` and `2π`.
fn log_chord(theta: f64, to_zero: f64, to_two_pi: f64) -> f64 {
    let s = if theta <= PI { (0.5 * to_zero).sin() } else { (0.5 * to_two_pi).sin() };
    (2.0 * s).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMoments {
    /// `∫ log|1 - z| dμ_a`.
    pub logmod: f64,
    /// `∫ arg(1 - z) dμ_a`.
    pub argmom: f64,
}

/// Log-modulus and argument moments of `μ_a` by direct quadrature.
pub fn circle_log_moments(a: f64) -> Result<LogMoments> {
    let th = theta_a(a)?;
    let mu = mu_a_measure(a)?;
    // twice the integral over [θ_a, π]
    let sa = a / (1.0 + a);
    let half = tanh_sinh(
        |theta: f64, da: f64, _| {
            let s = (0.5 * theta).sin();
            let gap = 2.0 * (0.25 * (theta + th)).cos() * (0.25 * da).sin();
            (2.0 * s).ln() * (gap * (s + sa)).max(0.0).sqrt() / s
        },
        th,
        PI,
        QUAD_TOL,
    )?
    .value;
    let logmod = (1.0 + a) / TAU * 2.0 * half;
    let argmom = mu.integrate(|theta| 0.5 * (theta - PI))?;
    Ok(LogMoments { logmod, argmom })
}

/// `𝒥(1+2a) - 𝒥(1+a) - 𝒥(2a) + 𝒥(a)`.
pub fn circle_logmod_closed(a: f64) -> f64 {
    j(1.0 + 2.0 * a) - j(1.0 + a) - j(2.0 * a) + j(a)
}

/// The `a > 0` with `∫ log|1 - z| dμ_a = ξ`, for `ξ ∈ (0, log 2)`.
pub fn invert_log_moment(xi: f64) -> Result<f64> {
    const OP: &str = "invert_log_moment";
    if !(xi > 0.0 && xi < LN_2) {
        return Err(Error::domain(OP, format!("ξ = {xi} outside (0, log 2)")));
    }
    let lm = |a: f64| circle_log_moments(a).map(|m| m.logmod);
    let (mut lo, mut hi) = (1e-3, 1.0);
    while lm(lo)? > xi {
        lo *= 0.5;
        if lo < 1e-12 {
            return Err(Error::NoConvergence {
                op: OP,
                iterations: 0,
                residual: xi,
            });
        }
    }
    let mut doublings = 0;
    while lm(hi)? < xi {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::NoConvergence {
                op: OP,
                iterations: doublings,
                residual: LN_2 - xi,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lm(mid)? < xi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Circle potential `Q_d(e^{iθ}) = -2Re d log(2 sin θ/2) - Im d (θ - π)`.
pub fn circle_potential(d: Complex64, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < TAU) {
        return Err(Error::domain("circle_potential", format!("θ = {theta} outside (0, 2π)")));
    }
    Ok(-2.0 * d.re * log_chord(theta, theta, TAU - theta) - d.im * (theta - PI))
}

/// `B(d) = F(1+2Re d) - F(2Re d) - 2Re F(1+d) + 2Re F(d) + F(1)`.
pub fn constant_b(d: Complex64) -> Result<f64> {
    if d.re < 0.0 {
        return Err(Error::domain("constant_b", "Re d must be non-negative"));
    }
    let r2 = 2.0 * d.re;
    Ok(f(1.0 + r2) - f(r2) - 2.0 * fc(d + 1.0).re + 2.0 * fc(d).re + f(1.0))
}

/// `B(d)` from its integral representation over `[0, 1]`.
pub fn constant_b_integral(d: Complex64) -> Result<f64> {
    if d.re < 0.0 {
        return Err(Error::domain("constant_b_integral", "Re d must be non-negative"));
    }
    let r2 = 2.0 * d.re;
    let xlx = |u: f64| if u == 0.0 { 0.0 } else { u * u.ln() };
    let est = tanh_sinh(
        |x: f64, _, _| {
            let w = d + x;
            let wlw = if w.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { w * w.ln() };
            xlx(x + r2) - 2.0 * wlw.re + xlx(x)
        },
        0.0,
        1.0,
        1e-14,
    )?;
    Ok(est.value)
}

/// `Σ_𝕋(μ) = ∫∫ log|z - z'| dμ(z) dμ(z')` by symmetric double quadrature.
pub fn circle_energy(mu: &RadonMeasure1D) -> Result<f64> {
    const OP: &str = "circle_energy";
    if mu.domain != MeasureDomain::Circle {
        return Err(Error::domain(OP, "measure is not on the circle"));
    }
    if mu.atoms.iter().any(|&(_, m)| m != 0.0) {
        return Err(Error::Degenerate {
            op: OP,
            detail: "atoms carry infinite logarithmic energy".into(),
        });
    }
    let (lo, hi) = mu.support;
    let gap = TAU - (hi - lo);
    // Σ = 2 ∫_θ p(θ) ∫_{φ<θ} p(φ) log(2 sin((θ-φ)/2)) dφ dθ
    let outer = tanh_sinh(
        |theta: f64, da: f64, db: f64| {
            let p = mu.density(theta).max((mu.density)(theta, da, db));
            if p == 0.0 || da == 0.0 {
                return 0.0;
            }
            let inner = tanh_sinh(
                |_phi: f64, pa: f64, pb: f64| {
                    // pb = θ - φ, and 2π - (θ - φ) = gap + (hi - θ) + (φ - lo)
                    let dist = pb;
                    let s = if dist <= PI {
                        (0.5 * dist).sin()
                    } else {
                        (0.5 * (gap + db + pa)).sin()
                    };
                    (mu.density)(lo + pa, pa, hi - lo - pa) * (2.0 * s).ln()
                },
                lo,
                theta,
                1e-11,
            );
            match inner {
                Ok(e) => p * e.value,
                Err(_) => f64::NAN,
            }
        },
        lo,
        hi,
        1e-9,
    )?;
    if !outer.value.is_finite() {
        return Err(Error::Quadrature {
            achieved: f64::NAN,
            requested: 1e-9,
        });
    }
    Ok(2.0 * outer.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyRate {
    /// `Σ_𝕋(μ)`.
    pub sigma: f64,
    /// `∫ Q_d dμ`.
    pub potential: f64,
    pub b: f64,
    /// `I_d(μ) = -Σ_𝕋(μ) + ∫ Q_d dμ + B(d)`.
    pub rate: f64,
}

pub fn energy_rate(mu: &RadonMeasure1D, d: Complex64) -> Result<EnergyRate> {
    let sigma = circle_energy(mu)?;
    let (lo, hi) = mu.support;
    let potential = mu.integrate_with(|theta, da, db| {
        let to_zero = lo + da;
        let to_two_pi = (TAU - hi) + db;
        -2.0 * d.re * log_chord(theta, to_zero, to_two_pi) - d.im * (theta - PI)
    })?;
    let b = constant_b(d)?;
    Ok(EnergyRate {
        sigma,
        potential,
        b,
        rate: -sigma + potential + b,
    })
}

/// External field on the line, `Q(x) = ½(1 + r/2) log(1 + x²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinePotential {
    pub r: f64,
}

impl LinePotential {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain("LinePotential", format!("r = {r} must be positive")));
        }
        Ok(LinePotential { r })
    }

    pub fn value(&self, x: f64) -> f64 {
        0.5 * (1.0 + 0.5 * self.r) * (x * x).ln_1p()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (1.0 + 0.5 * self.r) * x / (1.0 + x * x)
    }

    /// `x Q'(x)`, which must be positive and increasing on `(0, ∞)`.
    pub fn x_derivative(&self, x: f64) -> f64 {
        x * self.derivative(x)
    }

    /// Checks positivity and monotonicity of `x Q'(x)` on a grid of `(0, x_max]`.
    pub fn admissible_on_grid(&self, x_max: f64, n: usize) -> bool {
        let mut last = 0.0;
        (1..=n).all(|k| {
            let v = self.x_derivative(x_max * k as f64 / n as f64);
            let ok = v > last;
            last = v;
            ok
        })
    }
}

/// Support endpoint `b = 2√(1+r)/r`.
pub fn line_endpoint(r: f64) -> Result<f64> {
    LinePotential::new(r)?;
    Ok(2.0 * (1.0 + r).sqrt() / r)
}

/// Residual of the endpoint equation `∫₀¹ dt/((1+b²t²)√(1-t²)) = πr/(2(2+r))`.
pub fn endpoint_residual(r: f64, b: f64) -> Result<f64> {
    let lhs = tanh_sinh(
        |t: f64, _, db: f64| {
            // 1 - t² = (1 - t)(1 + t)
            1.0 / ((1.0 + b * b * t * t) * (db * (1.0 + t)).sqrt())
        },
        0.0,
        1.0,
        1e-14,
    )?
    .value;
    Ok(lhs - PI * r / (2.0 * (2.0 + r)))
}

/// `g_b(x) = (1 + √(1+b²))/(bπ) · √(1 - x²/b²)/(1 + x²)` on `[-b, b]`.
pub fn line_density(b: f64, x: f64) -> f64 {
    if x.abs() > b {
        return 0.0;
    }
    let u = x / b;
    (1.0 + (1.0 + b * b).sqrt()) / (b * PI) * ((1.0 - u) * (1.0 + u)).sqrt() / (1.0 + x * x)
}

/// The equilibrium measure of `LinePotential { r }`.
pub fn line_equilibrium(r: f64) -> Result<RadonMeasure1D> {
    let b = line_endpoint(r)?;
    let k = (1.0 + (1.0 + b * b).sqrt()) / (b * PI);
    let density = move |x: f64, da: f64, db: f64| {
        // 1 - x²/b² = (b - x)(b + x)/b² with both factors exact
        k * (da * db).max(0.0).sqrt() / b / (1.0 + x * x)
    };
    Ok(RadonMeasure1D::new(density, (-b, b), MeasureDomain::Line, (0.5, 0.5)))
}

/// `∫ log(1/|x - t|) dμ(t) + Q(x)` for a line measure.
pub fn line_total_potential(mu: &RadonMeasure1D, q: &LinePotential, x: f64) -> Result<f64> {
    let (lo, hi) = mu.support;
    if !(x > lo && x < hi) {
        return Err(Error::domain("line_total_potential", "x must be interior to the support"));
    }
    let left = tanh_sinh(|_t: f64, da, db| -(db.ln()) * (mu.density)(lo + da, da, hi - lo - da), lo, x, QUAD_TOL)?;
    let right = tanh_sinh(|_t: f64, da, db| -(da.ln()) * (mu.density)(hi - db, hi - lo - db, db), x, hi, QUAD_TOL)?;
    Ok(left.value + right.value + q.value(x))
}

/// Difference quotient `(s f'(s) - t f'(t))/(s² - t²)` for `f(s) = Q(bs)`.
///
/// `x Q'(x) - y Q'(y) = (1 + r/2)(x² - y²)/((1+x²)(1+y²))`, so the factor
/// `s² - t²` cancels exactly.
fn ls_quotient(q: &LinePotential, b: f64, s: f64, t: f64) -> f64 {
    let (x, y) = (b * s, b * t);
    (1.0 + 0.5 * q.r) * b * b / ((1.0 + x * x) * (1.0 + y * y))
}

/// `B_f = 1 - (1/π) ∫₋₁¹ s f'(s)/√(1-s²) ds` for `f(s) = Q(bs)`.
pub fn lubinsky_saff_constant(r: f64) -> Result<f64> {
    let q = LinePotential::new(r)?;
    let b = line_endpoint(r)?;
    let v = tanh_sinh(
        |s: f64, da: f64, db: f64| s * b * q.derivative(b * s) / (da * db).sqrt(),
        -1.0,
        1.0,
        1e-14,
    )?
    .value;
    Ok(1.0 - v / PI)
}

/// `g(t) = L[f'](t) + B_f/(π√(1-t²))` with `f(s) = Q(bs)`.
pub fn lubinsky_saff_density(r: f64, t: f64) -> Result<f64> {
    const OP: &str = "lubinsky_saff_density";
    let q = LinePotential::new(r)?;
    if !(t.abs() < 1.0) {
        return Err(Error::domain(OP, format!("t = {t} must lie in (-1, 1)")));
    }
    let b = line_endpoint(r)?;
    let st = ((1.0 - t) * (1.0 + t)).sqrt();
    let integral = tanh_sinh(
        |s: f64, _, db: f64| ls_quotient(&q, b, s, t) / (db * (1.0 + s)).sqrt(),
        0.0,
        1.0,
        1e-13,
    )?
    .value;
    let bf = lubinsky_saff_constant(r)?;
    Ok(2.0 / (PI * PI) * st * integral + bf / (PI * st))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CayleyReport {
    pub r: f64,
    /// `1/√(1+b²) - r/(r+2)`.
    pub endpoint_residual: f64,
    /// `(θ, pulled-back density, density of μ_{r/2}, relative error)`.
    pub pointwise: Vec<(f64, f64, f64, f64)>,
    pub max_relative_error: f64,
    pub pulled_back_mass: f64,
}

impl CayleyReport {
    pub fn within(&self, rel_tol: f64, mass_tol: f64) -> bool {
        self.endpoint_residual.abs() < 1e-12
            && self.max_relative_error < rel_tol
            && (self.pulled_back_mass - 1.0).abs() < mass_tol
    }
}

/// Pulls `g_b` back to the circle through `λ = cot(θ/2)` and compares with `μ_{r/2}`.
pub fn cayley_check(r: f64, angles: usize) -> Result<CayleyReport> {
    let b = line_endpoint(r)?;
    let a = 0.5 * r;
    let mu = mu_a_measure(a)?;
    let th = theta_a(a)?;
    // |dλ/dθ| = (1 + λ²)/2
    let pulled = |theta: f64| {
        let lam = 1.0 / (0.5 * theta).tan();
        line_density(b, lam) * 0.5 * (1.0 + lam * lam)
    };
    let n = angles.max(1);
    let mut pointwise = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let theta = th + (TAU - 2.0 * th) * (k as f64 + 0.5) / n as f64;
        let p = pulled(theta);
        let m = mu.density(theta);
        let rel = (p - m).abs() / m.abs().max(1e-300);
        worst = worst.max(rel);
        pointwise.push((theta, p, m, rel));
    }
    let mass = tanh_sinh(|theta: f64, _, _| pulled(theta), th, TAU - th, QUAD_TOL)?.value;
    Ok(CayleyReport {
        r,
        endpoint_residual: 1.0 / (1.0 + b * b).sqrt() - r / (r + 2.0),
        pointwise,
        max_relative_error: worst,
        pulled_back_mass: mass,
    })
}

/// `∫ α²/(v²+α²) dv` over the line, and its closed form `απ`.
pub fn integral_identity_1(alpha: f64) -> Result<(f64, f64)> {
    let v = sinh_sinh(|v: f64| alpha * alpha / (v * v + alpha * alpha), 1e-13)?.value;
    Ok((v, alpha * PI))
}

/// `∫ α² log(v²+β²)/(v²+α²) dv` over the line, and its closed form `2απ log(α+β)`.
pub fn integral_identity_2(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    let v = sinh_sinh(
        |v: f64| alpha * alpha * (v * v + beta * beta).ln() / (v * v + alpha * alpha),
        1e-13,
    )?
    .value;
    Ok((v, 2.0 * alpha * PI * (alpha + beta).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_a_basics() {
        assert!((theta_a(1.0).unwrap() - PI / 3.0).abs() < 1e-15);
        for a in [0.25, 1.0, 3.0] {
            let mu = mu_a_measure(a).unwrap();
            assert!((mu.mass().unwrap() - 1.0).abs() < 1e-8);
            assert_eq!(mu.density(mu.support.0), 0.0);
        }
        assert!(mu_a_measure(0.0).is_err());
    }

    #[test]
    fn log_moments() {
        let m = circle_log_moments(1.0).unwrap();
        let want = 3.0 * 3f64.ln() - 4.0 * 2f64.ln();
        assert!((m.logmod - want).abs() < 1e-8 && (want - 0.52325).abs() < 1e-5);
        for a in [0.25, 0.5, 2.0] {
            let m = circle_log_moments(a).unwrap();
            assert!(m.argmom.abs() < 1e-10, "{}", m.argmom);
            assert!((m.logmod - circle_logmod_closed(a)).abs() < 1e-8);
            let e = crate::asymptotics::limit_mean_e(Complex64::new(a, 0.0), 1.0).unwrap();
            assert!((m.logmod - e.re).abs() < 1e-8);
        }
    }

    #[test]
    fn b_forms_agree() {
        for d in [Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.5)] {
            let a = constant_b(d).unwrap();
            let b = constant_b_integral(d).unwrap();
            assert!((a - b).abs() < 1e-8, "{d}: {a} {b}");
            let c = crate::ldp::constant_c(d, 1.0).unwrap();
            assert!((a + c).abs() < 1e-12);
        }
        assert_eq!(constant_b(Complex64::new(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn uniform_energy() {
        let mu = RadonMeasure1D::uniform_circle();
        let r = energy_rate(&mu, Complex64::new(0.0, 0.0)).unwrap();
        assert!(r.sigma.abs() < 1e-6, "{}", r.sigma);
        assert!(r.rate.abs() < 1e-6);
    }

    #[test]
    fn rate_vanishes_at_mu_a() {
        for a in [0.5, 1.0] {
            let mu = mu_a_measure(a).unwrap();
            let r = energy_rate(&mu, Complex64::new(a, 0.0)).unwrap();
            assert!(r.rate.abs() < 1e-4, "a={a}: {r:?}");
            // constrained minimum: -Σ(μ_a) = γξ - 𝓛_0(1, γ, 0) with γ = 2a
            let gamma = 2.0 * a;
            let xi = circle_log_moments(a).unwrap().logmod;
            let want = gamma * xi - crate::ldp::cgf_l0(1.0, gamma, 0.0).unwrap();
            assert!((-r.sigma - want).abs() < 1e-4, "{} {want}", -r.sigma);
        }
    }

    #[test]
    fn atoms_rejected() {
        let mut mu = RadonMeasure1D::uniform_circle();
        mu.atoms.push((1.0, 0.1));
        assert!(circle_energy(&mu).is_err());
    }

    #[test]
    fn line_measure() {
        assert!((line_endpoint(2.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        for r in [0.5, 2.0, 6.0] {
            let b = line_endpoint(r).unwrap();
            assert!(endpoint_residual(r, b).unwrap().abs() < 1e-8);
            let mu = line_equilibrium(r).unwrap();
            assert!((mu.mass().unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn line_equilibrium_condition() {
        let r = 2.0;
        let q = LinePotential::new(r).unwrap();
        let mu = line_equilibrium(r).unwrap();
        let b = mu.support.1;
        let vals: Vec<f64> = (0..20)
            .map(|k| line_total_potential(&mu, &q, -b + 2.0 * b * (k as f64 + 0.5) / 20.0).unwrap())
            .collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-5, "{spread}");
        assert!(q.admissible_on_grid(50.0, 500));
    }

    #[test]
    fn lubinsky_saff() {
        for r in [0.7, 2.0] {
            let b = line_endpoint(r).unwrap();
            assert!(lubinsky_saff_constant(r).unwrap().abs() < 1e-8);
            for t in [0.0, 0.3, 0.9] {
                let g = lubinsky_saff_density(r, t).unwrap();
                assert!((g - b * line_density(b, b * t)).abs() < 1e-8, "{r} {t}");
                assert!((g - lubinsky_saff_density(r, -t).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cayley() {
        for r in [1.0, 2.0, 5.0] {
            let rep = cayley_check(r, 50).unwrap();
            assert!(rep.within(1e-6, 1e-8), "{rep:?}");
        }
    }

    #[test]
    fn integral_identities() {
        for alpha in [0.5, 1.0, 2.0] {
            let (a, b) = integral_identity_1(alpha).unwrap();
            assert!((a - b).abs() < 1e-8);
            for beta in [0.5, 1.0, 2.0] {
                let (a, b) = integral_identity_2(alpha, beta).unwrap();
                assert!((a - b).abs() < 1e-8, "{alpha} {beta}");
            }
        }
    }

    #[test]
    fn inversion_and_monotonicity() {
        let mut last = 0.0;
        for k in 1..=12 {
            let a = 0.25 * k as f64;
            let v = circle_log_moments(a).unwrap().logmod;
            assert!(v > last);
            last = v;
        }
        let xi = circle_logmod_closed(0.8);
        assert!((invert_log_moment(xi).unwrap() - 0.8).abs() < 1e-8);
    }
}
