//! The Poisson rate function `u log u - u + 1` and its primitive.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// `u log u - u + 1` for `u >= 0` (value 1 at `u = 0`), `+∞` for `u < 0`.
pub fn poisson_rate(u: f64) -> ExtendedReal {
    if u < 0.0 || u.is_nan() {
        ExtendedReal::PosInfinity
    } else {
        ExtendedReal::Finite(j(u))
    }
}

/// Primitive of [`poisson_rate`] vanishing at 0: `t²/2 log t - 3t²/4 + t`.
pub fn poisson_rate_primitive(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain(
            "poisson_rate_primitive",
            format!("t = {t} must be nonnegative"),
        ));
    }
    Ok(f(t))
}

/// Complex continuation of [`poisson_rate`] with the principal logarithm.
pub fn poisson_rate_complex(u: Complex64) -> Result<Complex64> {
    on_cut("poisson_rate_complex", u)?;
    Ok(jc(u))
}

/// Complex continuation of [`poisson_rate_primitive`].
pub fn poisson_rate_primitive_complex(u: Complex64) -> Result<Complex64> {
    on_cut("poisson_rate_primitive_complex", u)?;
    Ok(fc(u))
}

fn on_cut(op: &'static str, u: Complex64) -> Result<()> {
    if u.im == 0.0 && u.re < 0.0 {
        return Err(Error::domain(op, format!("{u} lies on the branch cut")));
    }
    Ok(())
}

fn xlogx(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.ln()
    }
}

/// `u log u - u + 1`, assuming `u >= 0`.
pub(crate) fn j(u: f64) -> f64 {
    xlogx(u) - u + 1.0
}

/// `t²/2 log t - 3t²/4 + t`, assuming `t >= 0`.
pub(crate) fn f(t: f64) -> f64 {
    0.5 * t * xlogx(t) - 0.75 * t * t + t
}

pub(crate) fn jc(u: Complex64) -> Complex64 {
    if u.norm() == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    u * u.ln() - u + 1.0
}

pub(crate) fn fc(u: Complex64) -> Complex64 {
    if u.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    u * u * (0.5 * u.ln() - 0.75) + u
}
