//! Complex log-Gamma, digamma and polygamma functions.
//!
//! All three use upward recurrence until the argument is far from the
//! origin, then the Stirling / asymptotic series. `log_gamma` sums principal
//! logarithms during the shift, so it is the branch that is holomorphic on
//! `ℂ \ (-∞, 0]` and agrees with `ln Γ(x)` on the positive axis.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_2, B_4, …, B_20`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Arguments with `|z|` at least this large (and not too close to the negative
/// axis) go straight to the asymptotic series.
const ASYMPTOTIC_RADIUS: f64 = 15.0;
const MAX_MODULUS: f64 = 1e300;
/// Largest number of recurrence steps we accept (bounds `Re z` from below).
const MAX_SHIFT: f64 = 1e6;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn check(op: &'static str, z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::domain(op, format!("non-finite argument {z}")));
    }
    if z.norm() > MAX_MODULUS {
        return Err(Error::Overflow {
            op,
            modulus: z.norm(),
        });
    }
    if z.re < -MAX_SHIFT {
        return Err(Error::domain(
            op,
            format!("Re z = {} is below the supported range (-1e6)", z.re),
        ));
    }
    Ok(())
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Number of unit shifts needed before the asymptotic series is accurate.
fn shift_count(z: Complex64) -> usize {
    if z.re >= ASYMPTOTIC_RADIUS {
        return 0;
    }
    if z.im.abs() >= ASYMPTOTIC_RADIUS {
        // keep |arg| <= π/2 so the remainder stays controlled
        return if z.re >= 0.0 { 0 } else { (-z.re).ceil() as usize };
    }
    (ASYMPTOTIC_RADIUS - z.re).ceil() as usize
}

/// Principal branch of `log Γ(z)` on `ℂ \ (-∞, 0]`.
///
/// On the negative real axis (the branch cut) and at the poles an error is
/// returned.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    const OP: &str = "log_gamma";
    check(OP, z)?;
    if z.im == 0.0 && z.re <= 0.0 {
        if is_nonpositive_integer(z) {
            return Err(Error::Pole { op: OP, z });
        }
        return Err(Error::domain(OP, format!("{z} lies on the branch cut")));
    }
    let n = shift_count(z);
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    Ok(stirling(z + n as f64) - shift)
}

/// Real `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be positive")));
    }
    log_gamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        series += pow * (b / (m * (m - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// Digamma `Ψ(z) = Γ'(z)/Γ(z)`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    polygamma(0, z)
}

/// Polygamma `Ψ^{(q)}(z)` for `q <= 3`.
pub fn polygamma(q: u32, z: Complex64) -> Result<Complex64> {
    const OP: &str = "polygamma";
    if q > 3 {
        return Err(Error::domain(OP, format!("order {q} not supported (max 3)")));
    }
    check(OP, z)?;
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { op: OP, z });
    }
    let n = shift_count(z);
    let q_fact = factorial(q);
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let mut shift = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let w = z + k as f64;
        if w.norm() == 0.0 {
            return Err(Error::Pole { op: OP, z });
        }
        shift += w.powi(-(q as i32) - 1);
    }
    Ok(polygamma_asymptotic(q, z + n as f64) - shift * (sign * q_fact))
}

fn factorial(q: u32) -> f64 {
    (1..=q).map(|i| i as f64).product()
}

fn polygamma_asymptotic(q: u32, z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    if q == 0 {
        let mut pow = inv2;
        let mut series = Complex64::new(0.0, 0.0);
        for (k, b) in BERNOULLI.iter().enumerate() {
            series += pow * (b / (2.0 * (k as f64 + 1.0)));
            pow *= inv2;
        }
        return z.ln() - inv * 0.5 - series;
    }
    let inv_q = inv.powi(q as i32);
    let mut total = inv_q * factorial(q - 1) + inv_q * inv * (0.5 * factorial(q));
    let mut pow = inv_q * inv2;
    // ratio (2k+q-1)!/(2k)!
    for (k, b) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        let mut ratio = 1.0;
        for i in 1..q {
            ratio *= two_k + i as f64;
        }
        total += pow * (b * ratio);
        pow *= inv2;
    }
    if q % 2 == 1 {
        total
    } else {
        -total
    }
}

/// Binet's kernel `f(s) = (1/2 - 1/s + 1/(e^s - 1)) / s`, continuous at `s = 0`
/// with `f(0) = 1/12`.
pub fn binet_kernel(s: f64) -> f64 {
    if s.abs() < 0.1 {
        let s2 = s * s;
        // Σ B_{2k} s^{2k-2} / (2k)!
        1.0 / 12.0
            + s2 * (-1.0 / 720.0
                + s2 * (1.0 / 30240.0 + s2 * (-1.0 / 1_209_600.0 + s2 * (1.0 / 47_900_160.0))))
    } else {
        (0.5 - 1.0 / s + 1.0 / s.exp_m1()) / s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_known_values() {
        assert!((ln_gamma(0.5).unwrap() - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-15);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-15);
        let f10: f64 = (1..10).map(|i| (i as f64).ln()).sum();
        assert!((ln_gamma(10.0).unwrap() - f10).abs() < 1e-13);
        assert!((ln_gamma(1e-3).unwrap() - 6.907_178_885_383_853).abs() < 1e-13);
    }

    #[test]
    fn log_gamma_reflection() {
        // Γ(z)Γ(1-z) = π / sin(πz) on the line Re z = 1/2
        for y in [0.1, 1.0, 3.0, 10.0, 40.0] {
            let z = c(0.5, y);
            let lhs = log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap();
            let rhs = (Complex64::from(PI) / (z * PI).sin()).ln();
            let diff = (lhs - rhs).exp() - 1.0;
            assert!(diff.norm() < 1e-12, "y = {y}: {diff}");
        }
    }

    #[test]
    fn log_gamma_recurrence_and_continuity() {
        for z in [c(-3.3, 0.7), c(0.2, -5.0), c(-20.5, 30.0), c(7.0, 100.0)] {
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            assert!((lhs - rhs).norm() < 1e-11 * (1.0 + lhs.norm()), "{z}");
        }
        // holomorphic branch: crossing Im z = 0 at Re z > 0 is smooth
        let a = log_gamma(c(3.0, 1e-9)).unwrap();
        let b = log_gamma(c(3.0, -1e-9)).unwrap();
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn log_gamma_errors() {
        assert!(matches!(log_gamma(c(-2.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(log_gamma(c(-2.5, 0.0)), Err(Error::Domain { .. })));
        assert!(matches!(log_gamma(c(1e301, 0.0)), Err(Error::Overflow { .. })));
        assert!(log_gamma(c(-2e6, 1.0)).is_err());
    }

    #[test]
    fn digamma_known_values() {
        assert!((digamma(c(1.0, 0.0)).unwrap().re + EULER_GAMMA).abs() < 1e-15);
        let half = digamma(c(0.5, 0.0)).unwrap().re;
        assert!((half + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
        // Im Ψ(1/2 + iy) = π/2 tanh(πy)
        let y = 0.8;
        let v = digamma(c(0.5, y)).unwrap();
        assert!((v.im - 0.5 * PI * (PI * y).tanh()).abs() < 1e-13);
        assert!(matches!(digamma(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(digamma(c(-3.0, 0.0)), Err(Error::Pole { .. })));
        // defined away from the poles on the negative axis
        let r = digamma(c(-0.5, 0.0)).unwrap();
        assert!((r.re - (half + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn polygamma_known_values() {
        assert!((polygamma(1, c(1.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        let zeta3 = 1.202_056_903_159_594_2;
        assert!((polygamma(2, c(1.0, 0.0)).unwrap().re + 2.0 * zeta3).abs() < 1e-13);
        assert!((polygamma(3, c(1.0, 0.0)).unwrap().re - PI.powi(4) / 15.0).abs() < 1e-12);
        assert!((polygamma(1, c(0.5, 0.0)).unwrap().re - PI * PI / 2.0).abs() < 1e-13);
        assert!(polygamma(4, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn polygamma_matches_finite_difference() {
        for z in [c(0.3, 0.4), c(2.5, -1.0), c(-1.5, 2.0), c(12.0, 3.0)] {
            let h = 1e-4;
            for q in 0..3 {
                let fd = (polygamma(q, z + h).unwrap() - polygamma(q, z - h).unwrap()) / (2.0 * h);
                let exact = polygamma(q + 1, z).unwrap();
                assert!((fd - exact).norm() < 1e-6 * (1.0 + exact.norm()), "q={q} z={z}");
            }
            let fd = (log_gamma(z + 1e-5).unwrap() - log_gamma(z - 1e-5).unwrap()) / 2e-5;
            if z.re > 0.0 || z.im != 0.0 {
                assert!((fd - digamma(z).unwrap()).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn binet_kernel_continuity() {
        assert!((binet_kernel(0.0) - 1.0 / 12.0).abs() < 1e-16);
        for s in [0.0999999, 0.1] {
            let series = {
                let s2 = s * s;
                1.0 / 12.0 - s2 / 720.0 + s2 * s2 / 30240.0
            };
            assert!((binet_kernel(s) - series).abs() < 1e-12);
        }
        // monotonically decreasing from 1/12 towards 0
        let mut prev = binet_kernel(0.0);
        for k in 1..200 {
            let v = binet_kernel(k as f64 * 0.25);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }
}
