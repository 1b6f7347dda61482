//! Abel–Plana evaluation of long sums of holomorphic summands.
//!
//! For `g` holomorphic on the strip `m <= Re t <= n` with subexponential
//! growth in `|Im t|`,
//!
//! ```text
//! Σ_{j=m+1}^{n} g(j) = ∫_m^n g + (g(n) - g(m))/2
//!     + i ∫_0^∞ [g(m+iy) - g(n+iy) - g(m-iy) + g(n-iy)] / (e^{2πy} - 1) dy.
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, gauss_legendre};

/// A summand that is holomorphic on a vertical strip.
pub trait HolomorphicSummand {
    fn eval(&self, t: Complex64) -> Result<Complex64>;

    /// A primitive of the summand along the real axis, when one is known in
    /// closed form. Otherwise the integral term is computed by quadrature.
    fn antiderivative(&self, _t: Complex64) -> Option<Result<Complex64>> {
        None
    }

    /// Real-part range on which the summand is holomorphic; `None` means the
    /// whole plane.
    fn strip(&self) -> Option<(f64, f64)> {
        None
    }
}

/// Output of [`abel_plana_sum`].
#[derive(Debug, Clone, Copy)]
pub struct AbelPlana {
    pub value: Complex64,
    /// Estimated absolute error of the boundary and integral terms.
    pub error: f64,
    /// Truncation point of the boundary integral.
    pub y_max: f64,
}

/// `Σ_{j=m+1}^{n} g(j)` via the Abel–Plana formula.
pub fn abel_plana_sum<G: HolomorphicSummand>(g: &G, m: f64, n: f64, tol: f64) -> Result<AbelPlana> {
    const OP: &str = "abel_plana_sum";
    if !(m < n) || !m.is_finite() || !n.is_finite() {
        return Err(Error::domain(OP, format!("need finite m < n, got m={m}, n={n}")));
    }
    if let Some((lo, hi)) = g.strip() {
        if m < lo || n > hi {
            return Err(Error::domain(
                OP,
                format!("[{m}, {n}] leaves the holomorphy strip [{lo}, {hi}]"),
            ));
        }
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let gm = g.eval(re(m))?;
    let gn = g.eval(re(n))?;

    let (integral, int_err) = match (g.antiderivative(re(n)), g.antiderivative(re(m))) {
        (Some(a), Some(b)) => (a? - b?, 0.0),
        _ => {
            let failed = std::cell::Cell::new(None);
            let est = gauss_kronrod(
                |x| match g.eval(re(x)) {
                    Ok(v) => v,
                    Err(e) => {
                        failed.set(Some(e));
                        Complex64::new(0.0, 0.0)
                    }
                },
                m,
                n,
                0.1 * tol,
                1e-14,
            )?;
            if let Some(e) = failed.into_inner() {
                return Err(e);
            }
            (est.value, est.error)
        }
    };

    let boundary = |y: f64| -> Result<Complex64> {
        let ci = Complex64::new(0.0, y);
        let num = g.eval(m + ci)? - g.eval(n + ci)? - g.eval(m - ci)? + g.eval(n - ci)?;
        Ok(Complex64::i() * num / (2.0 * std::f64::consts::PI * y).exp_m1())
    };

    let mut y_max = 1.0;
    while boundary(y_max)?.norm() > 1e-16 {
        y_max *= 1.5;
        if y_max > 200.0 {
            return Err(Error::Quadrature {
                achieved: boundary(y_max)?.norm(),
                requested: 1e-16,
            });
        }
    }

    const ORDER: usize = 20;
    let (nodes, weights) = gauss_legendre(ORDER);
    let panel_sum = |panels: usize| -> Result<Complex64> {
        let h = y_max / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(&weights) {
                acc += boundary(mid + 0.5 * h * x)? * (w * 0.5 * h);
            }
        }
        Ok(acc)
    };
    let mut panels = 2;
    let mut prev = panel_sum(panels)?;
    let mut bnd_err = f64::INFINITY;
    while panels < 1024 {
        panels *= 2;
        let next = panel_sum(panels)?;
        bnd_err = (next - prev).norm();
        prev = next;
        if bnd_err <= 0.1 * tol * prev.norm().max(1.0) {
            break;
        }
    }
    let error = bnd_err + int_err;
    let value = integral + 0.5 * (gn - gm) + prev;
    if !(error <= tol * value.norm().max(1.0)) {
        return Err(Error::Quadrature {
            achieved: error,
            requested: tol,
        });
    }
    Ok(AbelPlana {
        value,
        error,
        y_max,
    })
}

/// A closure-backed summand, convenient for tests and one-off sums.
pub struct FnSummand<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> HolomorphicSummand for FnSummand<F> {
    fn eval(&self, t: Complex64) -> Result<Complex64> {
        Ok((self.0)(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::digamma;

    #[test]
    fn sum_of_squares() {
        let g = FnSummand(|t: Complex64| t * t);
        let r = abel_plana_sum(&g, 0.0, 10.0, 1e-12).unwrap();
        assert!((r.value.re - 385.0).abs() < 1e-9, "{}", r.value);
        assert!(r.value.im.abs() < 1e-9);
    }

    #[test]
    fn constants_and_polynomials() {
        let g = FnSummand(|_t: Complex64| Complex64::new(3.0, 0.0));
        let r = abel_plana_sum(&g, 2.0, 9.0, 1e-12).unwrap();
        assert!((r.value.re - 21.0).abs() < 1e-10);
        let p = |t: Complex64| t.powi(4) - 3.0 * t.powi(3) + 0.5 * t + 2.0;
        let direct: f64 = (1..=20).map(|j| p(Complex64::new(j as f64, 0.0)).re).sum();
        let r = abel_plana_sum(&FnSummand(p), 0.0, 20.0, 1e-14).unwrap();
        assert!((r.value.re - direct).abs() < 1e-10 * direct.abs().max(1.0), "{} vs {direct}", r.value);
    }

    #[test]
    fn digamma_differences() {
        struct D;
        impl HolomorphicSummand for D {
            fn eval(&self, t: Complex64) -> Result<Complex64> {
                Ok(digamma(0.7 * t + 2.0)? - digamma(0.7 * t + Complex64::new(1.5, 0.3))?)
            }
            fn strip(&self) -> Option<(f64, f64)> {
                Some((0.0, f64::INFINITY))
            }
        }
        let direct: Complex64 = (1..=100).map(|j| D.eval(Complex64::new(j as f64, 0.0)).unwrap()).sum();
        let r = abel_plana_sum(&D, 0.0, 100.0, 1e-12).unwrap();
        assert!((r.value - direct).norm() < 1e-10, "{} vs {direct}", r.value);
    }

    #[test]
    fn rejects_bad_ranges() {
        let g = FnSummand(|t: Complex64| t);
        assert!(abel_plana_sum(&g, 5.0, 5.0, 1e-10).is_err());
        struct S;
        impl HolomorphicSummand for S {
            fn eval(&self, t: Complex64) -> Result<Complex64> {
                Ok(t)
            }
            fn strip(&self) -> Option<(f64, f64)> {
                Some((1.0, 10.0))
            }
        }
        assert!(abel_plana_sum(&S, 0.0, 5.0, 1e-10).is_err());
    }
}
