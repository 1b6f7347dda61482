//! The pointwise rate `H_a`, the Lagrangian `L` and their Legendre duality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// `H_a(ξ, η) = -ξ - log(2 cos η - e^ξ)`, finite iff `|η| < π/2` and `2 cos η > e^ξ`.
pub fn rate_ha(xi: f64, eta: f64) -> ExtendedReal {
    let gap = 2.0 * eta.cos() - xi.exp();
    if eta.abs() < std::f64::consts::FRAC_PI_2 && gap > 0.0 && xi.is_finite() {
        ExtendedReal::Finite(-xi - gap.ln())
    } else {
        ExtendedReal::PosInfinity
    }
}

fn check_x(op: &'static str, x: f64) -> Result<()> {
    if x > -1.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("X = {x} must exceed -1")))
    }
}

fn q(x: f64, y: f64) -> f64 {
    let h = 1.0 + 0.5 * x;
    h * h + 0.25 * y * y
}

/// `L(X, Y) = (1+X) log(1+X) + Y arctan(Y/(2+X)) - (1+X/2) log((1+X/2)² + Y²/4)`.
pub fn lagrangian(x: f64, y: f64) -> Result<f64> {
    check_x("lagrangian", x)?;
    Ok(lagrangian_unchecked(x, y))
}

pub(crate) fn lagrangian_unchecked(x: f64, y: f64) -> f64 {
    let a = 1.0 + x;
    let xlx = if a == 0.0 { 0.0 } else { a * a.ln() };
    xlx + y * (y / (2.0 + x)).atan() - (1.0 + 0.5 * x) * q(x, y).ln()
}

/// Gradient `(L_X, L_Y)`.
pub fn lagrangian_gradient(x: f64, y: f64) -> Result<[f64; 2]> {
    check_x("lagrangian_gradient", x)?;
    Ok([(1.0 + x).ln() - 0.5 * q(x, y).ln(), (y / (2.0 + x)).atan()])
}

/// Hessian of `L`.
pub fn lagrangian_hessian(x: f64, y: f64) -> Result<[[f64; 2]; 2]> {
    check_x("lagrangian_hessian", x)?;
    let qq = q(x, y);
    let h = 1.0 + 0.5 * x;
    let lxx = 1.0 / (1.0 + x) - h / (2.0 * qq);
    let lxy = -y / (4.0 * qq);
    let lyy = h / (2.0 * qq);
    Ok([[lxx, lxy], [lxy, lyy]])
}

/// Result of the numerical Legendre transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreResult {
    pub value: ExtendedReal,
    pub argmax: Option<[f64; 2]>,
    pub iterations: usize,
}

/// `sup_{X > -1, Y} [Xξ + Yη - L(X, Y)]` by damped Newton ascent.
///
/// The search runs in `(log(1+X), Y)` starting from the origin. When the
/// iterates escape to infinity the supremum is reported as `+∞`.
pub fn legendre_numeric(xi: f64, eta: f64) -> Result<LegendreResult> {
    const OP: &str = "legendre_numeric";
    const MAX_ITER: usize = 500;
    const ESCAPE: f64 = 1e9;
    // everything in terms of a = 1 + X = e^w, so that X near -1 keeps its digits
    let objective = |w: f64, y: f64| {
        let a = w.exp();
        let h = 0.5 * (1.0 + a);
        (a - 1.0) * xi + y * eta - (a * w + y * (y / (1.0 + a)).atan() - h * (h * h + 0.25 * y * y).ln())
    };
    let escaped = |w: f64, y: f64, v: f64| w > ESCAPE.ln() || y.abs() > ESCAPE || v > ESCAPE;
    let (mut w, mut y) = (0.0f64, 0.0f64);
    let mut val = objective(w, y);
    let mut res = f64::NAN;
    for it in 0..MAX_ITER {
        let a = w.exp();
        let h = 0.5 * (1.0 + a);
        let q = h * h + 0.25 * y * y;
        let r0 = xi - (w - 0.5 * q.ln());
        let r1 = eta - (y / (1.0 + a)).atan();
        res = r0.hypot(r1);
        if res < 1e-13 {
            return Ok(LegendreResult {
                value: ExtendedReal::Finite(val),
                argmax: Some([a - 1.0, y]),
                iterations: it,
            });
        }
        // Jacobian of ∇L(X(w), Y) in (w, Y), using dX/dw = a
        let lxx_a = 1.0 - a * h / (2.0 * q);
        let lxy = -y / (4.0 * q);
        let lyy = h / (2.0 * q);
        let (m00, m01, m10, m11) = (lxx_a, lxy, lxy * a, lyy);
        let det = m00 * m11 - m01 * m10;
        let grad = [r0 * a, r1];
        let mut step = if det.abs() > 1e-300 {
            [(m11 * r0 - m01 * r1) / det, (m00 * r1 - m10 * r0) / det]
        } else {
            grad
        };
        // fall back to the gradient when Newton does not point uphill
        if step[0] * grad[0] + step[1] * grad[1] <= 0.0 {
            step = grad;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (nw, ny) = (w + t * step[0], y + t * step[1]);
            if nw < 700.0 {
                let nv = objective(nw, ny);
                if nv.is_finite() && nv >= val - 1e-14 * val.abs().max(1.0) {
                    w = nw;
                    y = ny;
                    val = nv;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if escaped(w, y, val) {
            return Ok(LegendreResult {
                value: ExtendedReal::PosInfinity,
                argmax: None,
                iterations: it,
            });
        }
        if !accepted {
            return Err(Error::NoConvergence {
                op: OP,
                iterations: it,
                residual: res,
            });
        }
    }
    // still climbing after the budget: unbounded along the escape direction
    if w.exp() > 1e4 || y.abs() > 1e4 {
        return Ok(LegendreResult {
            value: ExtendedReal::PosInfinity,
            argmax: None,
            iterations: MAX_ITER,
        });
    }
    Err(Error::NoConvergence {
        op: OP,
        iterations: MAX_ITER,
        residual: res,
    })
}

/// Closed-form maximizer of `Xξ + Yη - L` on the admissible region.
pub fn legendre_argmax(xi: f64, eta: f64) -> Option<[f64; 2]> {
    if !rate_ha(xi, eta).is_finite() {
        return None;
    }
    let den = eta.cos() - 0.5 * xi.exp();
    Some([(xi.exp() - eta.cos()) / den, eta.sin() / den])
}

/// `lim κ⁻¹ H_a(κξ, κη)`: `-ξ` on the half-line `ξ <= 0, η = 0`, `+∞` elsewhere.
pub fn recession(xi: f64, eta: f64) -> ExtendedReal {
    if eta == 0.0 && xi <= 0.0 {
        ExtendedReal::Finite(-xi)
    } else {
        ExtendedReal::PosInfinity
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_values() {
        assert_eq!(rate_ha(0.0, 0.0), ExtendedReal::Finite(0.0));
        assert_eq!(rate_ha(0.0, 1.6), ExtendedReal::PosInfinity);
        assert_eq!(rate_ha(1.0, 0.0), ExtendedReal::PosInfinity);
        let v = rate_ha(-1.0, 0.0).finite().unwrap();
        assert!((v - (1.0 - (2.0 - (-1f64).exp()).ln())).abs() < 1e-15);
        assert!((v - 0.510120).abs() < 1e-6);
    }

    #[test]
    fn lagrangian_forms_agree() {
        use crate::specfun::entropy::{j, jc};
        use num_complex::Complex64;
        assert_eq!(lagrangian(0.0, 0.0).unwrap(), 0.0);
        for (x, y) in [(0.3, 0.0), (-0.7, 1.2), (4.0, -2.0)] {
            let z = Complex64::new(0.5 * x, 0.5 * y);
            let other0 = j(1.0 + x) - 2.0 * jc(z + 1.0).re;
            assert!((lagrangian(x, y).unwrap() - other0).abs() < 1e-13);
        }
        assert!(lagrangian(-1.5, 0.0).is_err());
    }

    #[test]
    fn lagrangian_derivatives() {
        let h = 1e-5;
        for (x, y) in [(0.2, 0.3), (-0.8, -1.0), (3.0, 2.0)] {
            let g = lagrangian_gradient(x, y).unwrap();
            let fx = (lagrangian(x + h, y).unwrap() - lagrangian(x - h, y).unwrap()) / (2.0 * h);
            let fy = (lagrangian(x, y + h).unwrap() - lagrangian(x, y - h).unwrap()) / (2.0 * h);
            assert!((g[0] - fx).abs() < 1e-8 && (g[1] - fy).abs() < 1e-8);
            let hs = lagrangian_hessian(x, y).unwrap();
            let gx = lagrangian_gradient(x + h, y).unwrap();
            let gx0 = lagrangian_gradient(x - h, y).unwrap();
            assert!(((gx[0] - gx0[0]) / (2.0 * h) - hs[0][0]).abs() < 1e-7);
            assert!(((gx[1] - gx0[1]) / (2.0 * h) - hs[1][0]).abs() < 1e-7);
            let det = hs[0][0] * hs[1][1] - hs[0][1] * hs[1][0];
            assert!(hs[0][0] > 0.0 && det > 0.0);
        }
    }

    #[test]
    fn legendre_matches_closed_form() {
        let r = legendre_numeric(0.0, 0.0).unwrap();
        assert_eq!(r.value.finite().unwrap(), 0.0);
        assert_eq!(r.argmax, Some([0.0, 0.0]));
        for (xi, eta) in [(-2.0, 0.3), (0.5, -0.4), (-0.1, 1.1), (0.6, 0.0)] {
            let r = legendre_numeric(xi, eta).unwrap();
            let exact = rate_ha(xi, eta).finite().unwrap();
            assert!((r.value.finite().unwrap() - exact).abs() < 1e-9, "{xi},{eta}");
            let am = legendre_argmax(xi, eta).unwrap();
            let got = r.argmax.unwrap();
            assert!((am[0] - got[0]).abs() < 1e-6 * am[0].abs().max(1.0));
            assert!((am[1] - got[1]).abs() < 1e-6 * am[1].abs().max(1.0));
        }
        for (xi, eta) in [(1.0, 0.0), (0.0, 1.7), (0.5, 1.0)] {
            assert_eq!(legendre_numeric(xi, eta).unwrap().value, ExtendedReal::PosInfinity, "{xi},{eta}");
        }
    }

    #[test]
    fn recession_slope() {
        for xi in [-0.5, -2.0] {
            let v = legendre_numeric(64.0 * xi, 0.0).unwrap().value.finite().unwrap() / 64.0;
            assert!((v + xi).abs() < 0.02, "{v}");
            assert_eq!(recession(xi, 0.0), ExtendedReal::Finite(-xi));
        }
        assert_eq!(recession(-1.0, 0.1), ExtendedReal::PosInfinity);
    }
}
