//! Numerical quadrature used throughout the crate.
//!
//! Three families are provided:
//!
//! * Gauss–Legendre rules (fixed order, composite panels) for smooth integrands;
//! * adaptive Gauss–Kronrod (G7/K15) with global bisection, for smooth or mildly
//!   peaked integrands on finite intervals;
//! * double-exponential rules (tanh–sinh on `[a, b]`, exp–sinh on `[a, ∞)`,
//!   sinh–sinh on `ℝ`) for integrands with algebraic or logarithmic endpoint
//!   singularities.
//!
//! The tanh–sinh rule hands the integrand the exact distances to both
//! endpoints so that factors such as `√(1 − t²)` can be evaluated without
//! cancellation next to the boundary.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: `f64` and `Complex64`.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An integral estimate together with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule with `panels` equal panels of the given order.
pub fn gauss_legendre_composite<T, F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> T
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = T::zero();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut s = T::zero();
        for (xi, wi) in x.iter().zip(&w) {
            s = s + f(mid + 0.5 * h * xi) * *wi;
        }
        total = total + s * (0.5 * h);
    }
    total
}

const GK15_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK15_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK15_WK[7];
    let mut gauss = fc * GK15_WG[3];
    for j in 0..7 {
        let dx = h * GK15_XK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron = kron + (f1 + f2) * GK15_WK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * GK15_WG[j / 2];
        }
    }
    let err = (kron - gauss).magnitude() * h.abs();
    (kron * h, err)
}

/// Adaptive G7/K15 quadrature with global error control.
///
/// Stops when the summed error estimate drops below `max(abs_tol, rel_tol·|I|)`.
pub fn gauss_kronrod<T, F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    const MAX_INTERVALS: usize = 2000;
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        for iv in &intervals {
            total = total + iv.2;
            err += iv.3;
        }
        let target = abs_tol.max(rel_tol * total.magnitude());
        if err <= target {
            return Ok(Estimate {
                value: total,
                error: err,
                evaluations,
            });
        }
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                achieved: err,
                requested: target,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            return Err(Error::Quadrature {
                achieved: err,
                requested: target,
            });
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evaluations += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

const DE_TMAX: f64 = 6.5;
const DE_MAX_LEVEL: usize = 12;

/// Tanh–sinh quadrature on `[a, b]`.
///
/// The integrand is called as `f(x, x - a, b - x)`, where both distances are
/// computed without cancellation. The rule tolerates integrable algebraic and
/// logarithmic singularities at either endpoint.
pub fn tanh_sinh<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64, f64, f64) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    // for b < a integrate over [b, a] and flip the sign
    let (flip, a, b) = if b < a { (true, b, a) } else { (false, a, b) };
    let half = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut evaluations = 0usize;
    let mut eval = |t: f64| -> Option<T> {
        let u = half_pi * t.sinh();
        let cu = u.cosh();
        let w = half_pi * t.cosh() / (cu * cu);
        // 1 + tanh u and 1 - tanh u without cancellation.
        let da = 2.0 * half / (1.0 + (-2.0 * u).exp());
        let db = 2.0 * half / (1.0 + (2.0 * u).exp());
        if da <= 0.0 || db <= 0.0 || !w.is_finite() || w == 0.0 {
            return None;
        }
        // x may round onto an endpoint; the distances stay exact
        let x = if da < db { a + da } else { b - db };
        evaluations += 1;
        let v = if flip { f(x, db, da) } else { f(x, da, db) };
        Some(v * (w * half))
    };
    let mut h = 1.0;
    let mut sum = eval(0.0).unwrap_or_else(T::zero);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > DE_TMAX {
            break;
        }
        let (p, m) = (eval(t), eval(-t));
        if p.is_none() && m.is_none() {
            break;
        }
        sum = sum + p.unwrap_or_else(T::zero) + m.unwrap_or_else(T::zero);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > DE_TMAX {
                break;
            }
            let (p, m) = (eval(t), eval(-t));
            if p.is_none() && m.is_none() {
                break;
            }
            sum = sum + p.unwrap_or_else(T::zero) + m.unwrap_or_else(T::zero);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).magnitude();
        estimate = next;
        if level >= 3 && error <= tol * estimate.magnitude().max(1e-300) {
            break;
        }
        if level >= 3 && error <= tol * 1e-3 {
            break;
        }
    }
    if !(error <= tol * estimate.magnitude().max(1.0)) {
        return Err(Error::Quadrature {
            achieved: error,
            requested: tol,
        });
    }
    Ok(Estimate {
        value: if flip { estimate * -1.0 } else { estimate },
        error,
        evaluations,
    })
}

/// Convenience wrapper around [`tanh_sinh`] for integrands that only need `x`.
pub fn tanh_sinh_simple<T, F>(f: F, a: f64, b: f64, tol: f64) -> Result<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    tanh_sinh(|x, _, _| f(x), a, b, tol).map(|e| e.value)
}

/// Exp–sinh quadrature on `[a, ∞)`. The integrand must decay at infinity.
pub fn exp_sinh<T, F>(f: F, a: f64, tol: f64) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    // x = a + exp(π/2 sinh t), dx = π/2 cosh t · exp(π/2 sinh t) dt
    double_exponential(
        |t| {
            let e = (std::f64::consts::FRAC_PI_2 * t.sinh()).exp();
            (a + e, std::f64::consts::FRAC_PI_2 * t.cosh() * e)
        },
        f,
        tol,
    )
}

/// Sinh–sinh quadrature on the whole real line.
pub fn sinh_sinh<T, F>(f: F, tol: f64) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    double_exponential(
        |t| {
            let u = std::f64::consts::FRAC_PI_2 * t.sinh();
            (u.sinh(), std::f64::consts::FRAC_PI_2 * t.cosh() * u.cosh())
        },
        f,
        tol,
    )
}

fn double_exponential<T, M, F>(map: M, f: F, tol: f64) -> Result<Estimate<T>>
where
    T: QuadValue,
    M: Fn(f64) -> (f64, f64),
    F: Fn(f64) -> T,
{
    const TMAX: f64 = 4.5;
    let mut evaluations = 0usize;
    let mut eval = |t: f64| -> Option<T> {
        let (x, w) = map(t);
        if !x.is_finite() || !w.is_finite() || w == 0.0 {
            return None;
        }
        evaluations += 1;
        let v = f(x) * w;
        if v.magnitude().is_finite() {
            Some(v)
        } else {
            None
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0).unwrap_or_else(T::zero);
    let mut k = 1;
    while (k as f64) * h <= TMAX {
        let t = k as f64 * h;
        sum = sum + eval(t).unwrap_or_else(T::zero) + eval(-t).unwrap_or_else(T::zero);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= TMAX {
            let t = k as f64 * h;
            sum = sum + eval(t).unwrap_or_else(T::zero) + eval(-t).unwrap_or_else(T::zero);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).magnitude();
        estimate = next;
        if level >= 3 && error <= tol * estimate.magnitude().max(1e-300) {
            break;
        }
    }
    if !(error <= tol * estimate.magnitude().max(1.0)) {
        return Err(Error::Quadrature {
            achieved: error,
            requested: tol,
        });
    }
    Ok(Estimate {
        value: estimate,
        error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 10, 20] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "n={n}: {s} vs {exact}");
        }
    }

    #[test]
    fn kronrod_handles_oscillation() {
        let e = gauss_kronrod(|x: f64| (10.0 * x).sin(), 0.0, 3.0, 1e-13, 1e-13).unwrap();
        let exact = (1.0 - (30.0f64).cos()) / 10.0;
        assert!((e.value - exact).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 dx/√(1-x²) = π/2, using the exact distance to 1
        let e = tanh_sinh(|x, _, db| 1.0 / (db * (1.0 + x)).sqrt(), 0.0, 1.0, 1e-14).unwrap();
        assert!((e.value - std::f64::consts::FRAC_PI_2).abs() < 1e-13, "{}", e.value);
        // ∫_0^1 log x dx = -1
        let e = tanh_sinh(|_, da, _| da.ln(), 0.0, 1.0, 1e-14).unwrap();
        assert!((e.value + 1.0).abs() < 1e-13);
    }

    #[test]
    fn infinite_ranges() {
        let e = exp_sinh(|x: f64| (-x).exp(), 0.0, 1e-13).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        let e = sinh_sinh(|x: f64| 1.0 / (1.0 + x * x), 1e-13).unwrap();
        assert!((e.value - std::f64::consts::PI).abs() < 1e-12);
    }
}
