//! Exact finite-`n` moments of `log Φ_{m,n}(1)` and their limits.
//!
//! Coefficient `j` has rank weight `r = β'(n-j-1)`; summing over the first
//! `m` coefficients is the same as summing `k = n-j` over `n-m+1 ..= n`, with
//! `r = β'(k-1)`. For large `n` these sums are evaluated with the Abel–Plana
//! formula applied to the holomorphic continuation in `k`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma_law::{cumulants, CoefficientLaw};
use crate::params::EnsembleParams;
use crate::quad::exp_sinh;
use crate::specfun::entropy::{j, jc};
use crate::specfun::{abel_plana_sum, binet_kernel, log_gamma, polygamma, HolomorphicSummand};

/// Above this `n` the automatic evaluators switch to Abel–Plana.
pub const ACCELERATION_CROSSOVER: usize = 10_000;

const ABEL_PLANA_TOL: f64 = 1e-12;

/// 2×2 real matrix, row-major.
pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Summation {
    /// Direct below the crossover, Abel–Plana above.
    Auto,
    Direct,
    AbelPlana,
}

/// `Σ c_i Ψ^{(q)}(β'(t-1) + 1 + a_i)` as a function of the continuous index `t`.
struct PolygammaSeries {
    q: u32,
    beta_prime: f64,
    terms: Vec<(Complex64, Complex64)>,
}

impl PolygammaSeries {
    fn arg(&self, t: Complex64, shift: Complex64) -> Complex64 {
        (t - 1.0) * self.beta_prime + 1.0 + shift
    }
}

impl HolomorphicSummand for PolygammaSeries {
    fn eval(&self, t: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, a) in &self.terms {
            acc += c * polygamma(self.q, self.arg(t, a))?;
        }
        Ok(acc)
    }

    fn antiderivative(&self, t: Complex64) -> Option<Result<Complex64>> {
        let eval = || -> Result<Complex64> {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(c, a) in &self.terms {
                let z = self.arg(t, a);
                let v = if self.q == 0 {
                    log_gamma(z)?
                } else {
                    polygamma(self.q - 1, z)?
                };
                acc += c * v;
            }
            Ok(acc / self.beta_prime)
        };
        Some(eval())
    }

    fn strip(&self) -> Option<(f64, f64)> {
        // arguments keep a positive real part for t >= lo
        let min_re = self.terms.iter().map(|&(_, a)| a.re).fold(f64::INFINITY, f64::min);
        Some((1.0 - (1.0 + min_re) / self.beta_prime + 1e-12, f64::INFINITY))
    }
}

/// Sum the series over `k = n-m+1 ..= n`.
fn series_sum(series: &PolygammaSeries, n: usize, m: usize, method: Summation) -> Result<Complex64> {
    let direct = match method {
        Summation::Direct => true,
        Summation::AbelPlana => false,
        Summation::Auto => n <= ACCELERATION_CROSSOVER,
    };
    let lo = n - m;
    if direct || m <= 2 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (lo + 1)..=n {
            acc += series.eval(Complex64::new(k as f64, 0.0))?;
        }
        return Ok(acc);
    }
    // the continuation may hit a pole below k = 1, so the k = 1 term is added by hand
    let (start, head) = if lo == 0 {
        (1, series.eval(Complex64::new(1.0, 0.0))?)
    } else {
        (lo, Complex64::new(0.0, 0.0))
    };
    let ap = abel_plana_sum(series, start as f64, n as f64, ABEL_PLANA_TOL)?;
    Ok(head + ap.value)
}

fn check_m(op: &'static str, params: &EnsembleParams, m: usize) -> Result<()> {
    if m == 0 || m > params.n {
        return Err(Error::domain(op, format!("m = {m} must lie in 1..={}", params.n)));
    }
    Ok(())
}

fn mean_series(params: &EnsembleParams) -> PolygammaSeries {
    let delta = params.delta();
    PolygammaSeries {
        q: 0,
        beta_prime: params.beta_prime(),
        terms: vec![
            (Complex64::new(1.0, 0.0), Complex64::new(2.0 * delta.re, 0.0)),
            (Complex64::new(-1.0, 0.0), delta.conj()),
        ],
    }
}

/// Covariance entries as polygamma series: (Var Re, Var Im, Cov).
fn cov_series(params: &EnsembleParams) -> [PolygammaSeries; 3] {
    let delta = params.delta();
    let bp = params.beta_prime();
    let one = Complex64::new(1.0, 0.0);
    let quarter = Complex64::new(0.25, 0.0);
    let sum = Complex64::new(2.0 * delta.re, 0.0);
    let mk = |terms| PolygammaSeries {
        q: 1,
        beta_prime: bp,
        terms,
    };
    // ½ Re Ψ'(x+δ) = ¼Ψ'(x+δ) + ¼Ψ'(x+conj δ); ½ Im Ψ'(x+δ) = (Ψ'(x+δ) - Ψ'(x+conj δ))/(4i)
    let inv4i = Complex64::new(0.0, -0.25);
    [
        mk(vec![(one, sum), (-quarter, delta), (-quarter, delta.conj())]),
        mk(vec![(quarter, delta), (quarter, delta.conj())]),
        mk(vec![(inv4i, delta), (-inv4i, delta.conj())]),
    ]
}

/// `E log Φ_{m,n}(1)`.
pub fn exact_mean_logphi(params: &EnsembleParams, m: usize) -> Result<Complex64> {
    exact_mean_logphi_with(params, m, Summation::Auto)
}

pub fn exact_mean_logphi_with(params: &EnsembleParams, m: usize, method: Summation) -> Result<Complex64> {
    check_m("exact_mean_logphi", params, m)?;
    series_sum(&mean_series(params), params.n, m, method)
}

/// `E log Φ_{m,n}(1)` for every `m = 0..=n`, by direct cumulative summation.
pub fn exact_mean_path(params: &EnsembleParams) -> Result<Vec<Complex64>> {
    let delta = params.delta();
    let mut out = Vec::with_capacity(params.n + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for j in 0..params.n {
        let law = CoefficientLaw::new(params.rank_weight(j), delta)?;
        let sum = Complex64::new(law.r + 1.0 + 2.0 * delta.re, 0.0);
        acc += polygamma(0, sum)? - polygamma(0, (delta + law.r + 1.0).conj())?;
        out.push(acc);
    }
    Ok(out)
}

/// Covariance of `ζ_n = (ξ_n, η_n)` at index `m`.
pub fn exact_cov_zeta(params: &EnsembleParams, m: usize) -> Result<Mat2> {
    exact_cov_zeta_with(params, m, Summation::Auto)
}

pub fn exact_cov_zeta_with(params: &EnsembleParams, m: usize, method: Summation) -> Result<Mat2> {
    check_m("exact_cov_zeta", params, m)?;
    let [vr, vi, cv] = cov_series(params);
    let var_re = series_sum(&vr, params.n, m, method)?.re;
    let var_im = series_sum(&vi, params.n, m, method)?.re;
    let cov = if params.delta().im == 0.0 {
        0.0
    } else {
        series_sum(&cv, params.n, m, method)?.re
    };
    Ok([[var_re, cov], [cov, var_im]])
}

/// Covariance of `ζ_n` at every `m = 0..=n`, by direct cumulative summation.
pub fn exact_cov_path(params: &EnsembleParams) -> Result<Vec<Mat2>> {
    let delta = params.delta();
    let mut out = Vec::with_capacity(params.n + 1);
    let mut acc = [[0.0; 2]; 2];
    out.push(acc);
    for j in 0..params.n {
        let c = cumulants(&CoefficientLaw::new(params.rank_weight(j), delta)?)?;
        for a in 0..2 {
            for b in 0..2 {
                acc[a][b] += c.covariance[a][b];
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// `Σ_{j < m} E|A_j|⁴` bound, `A_j = log(1-γ_j) - E log(1-γ_j)`.
pub fn fourth_moment_sum(params: &EnsembleParams, m: usize) -> Result<f64> {
    if m > params.n {
        return Err(Error::domain("fourth_moment_sum", format!("m = {m} exceeds n = {}", params.n)));
    }
    let delta = params.delta();
    let mut acc = 0.0;
    for j in 0..m {
        acc += cumulants(&CoefficientLaw::new(params.rank_weight(j), delta)?)?.fourth_bound;
    }
    Ok(acc)
}

/// Split of the exact mean into the entropy part, the logarithmic part, the
/// Binet remainders and the Abel–Plana boundary integral.
///
/// `total = entropy_part + log_part + binet_remainder + boundary`; requires `m < n`
/// (for `m = n` in the fixed regime the continuation is not defined at the lower end).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MeanDecomposition {
    pub entropy_part: Complex64,
    pub log_part: Complex64,
    pub binet_remainder: Complex64,
    pub boundary: Complex64,
    pub total: Complex64,
}

/// Binet remainder of `(1/β') ℓ(x+1) + ½ Ψ(x+1)` after its elementary part.
fn binet_r1(beta_prime: f64, x: Complex64) -> Result<Complex64> {
    let tol = 1e-12;
    let a = exp_sinh(
        |s: f64| {
            let e = (-s * x).exp();
            let f = binet_kernel(s);
            (e - (-s).exp()) * (f / beta_prime) + e * (0.5 * (0.5 - s * f))
        },
        0.0,
        tol,
    )?;
    Ok(a.value)
}

pub fn mean_decomposition(params: &EnsembleParams, m: usize) -> Result<MeanDecomposition> {
    const OP: &str = "mean_decomposition";
    check_m(OP, params, m)?;
    if m == params.n {
        return Err(Error::domain(OP, "needs m < n"));
    }
    let bp = params.beta_prime();
    let delta = params.delta();
    let n = params.n as f64;
    let mf = m as f64;
    let alphas = [Complex64::new(2.0 * delta.re, 0.0), delta.conj()];
    let signs = [1.0, -1.0];
    let mut entropy_part = Complex64::new(0.0, 0.0);
    let mut log_part = Complex64::new(0.0, 0.0);
    let mut binet_remainder = Complex64::new(0.0, 0.0);
    for (alpha, sign) in alphas.iter().zip(signs) {
        let y_top = alpha / bp + (n - 1.0);
        let y_bot = alpha / bp + (n - mf - 1.0);
        entropy_part += (jc(y_top) - jc(y_bot)) * sign;
        log_part += (y_top.ln() - y_bot.ln()) * sign;
        let x_top = alpha + bp * (n - 1.0);
        let x_bot = alpha + bp * (n - mf - 1.0);
        binet_remainder += (binet_r1(bp, x_top)? - binet_r1(bp, x_bot)?) * sign;
    }
    log_part *= 1.0 / params.beta + 0.5;
    let series = mean_series(params);
    let lo = n - mf;
    let ap = abel_plana_sum(&series, lo, n, ABEL_PLANA_TOL)?;
    let g_lo = series.eval(Complex64::new(lo, 0.0))?;
    let g_hi = series.eval(Complex64::new(n, 0.0))?;
    let integral = series.antiderivative(Complex64::new(n, 0.0)).unwrap()?
        - series.antiderivative(Complex64::new(lo, 0.0)).unwrap()?;
    let boundary = ap.value - integral - 0.5 * (g_hi - g_lo);
    let total = entropy_part + log_part + binet_remainder + boundary;
    Ok(MeanDecomposition {
        entropy_part,
        log_part,
        binet_remainder,
        boundary,
        total,
    })
}

fn check_d_t(op: &'static str, d: Complex64, t: f64) -> Result<()> {
    if !(d.re > 0.0) {
        return Err(Error::domain(op, format!("needs Re d > 0, got {d}")));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(op, format!("t = {t} must lie in (0, 1]")));
    }
    Ok(())
}

/// Limit of `E log Φ_{⌊nt⌋,n}(1) / n` in the scaled regime.
pub fn limit_mean_e(d: Complex64, t: f64) -> Result<Complex64> {
    check_d_t("limit_mean_e", d, t)?;
    let s = 1.0 + 2.0 * d.re;
    let w = d.conj() + 1.0;
    Ok(Complex64::from(j(s) - j(s - t)) - jc(w) + jc(w - t))
}

/// Order-one correction function paired with [`limit_mean_e`].
pub fn limit_mean_f(d: Complex64, t: f64) -> Result<Complex64> {
    check_d_t("limit_mean_f", d, t)?;
    let s = 1.0 + 2.0 * d.re;
    let w = d.conj() + 1.0;
    Ok(Complex64::from(s.ln() - (s - t).ln()) - w.ln() + (w - t).ln())
}

/// Both limit mean functions at once.
pub fn limit_mean_functions(d: Complex64, t: f64) -> Result<(Complex64, Complex64)> {
    Ok((limit_mean_e(d, t)?, limit_mean_f(d, t)?))
}

/// Covariance density of the limiting diffusion and its integral over `[0, t]`.
///
/// `d = 0` gives the fixed-regime density `I₂ / (β(1-t))`.
pub fn limit_covariance(beta: f64, d: Complex64, t: f64) -> Result<(Mat2, Mat2)> {
    const OP: &str = "limit_covariance";
    if !(beta > 0.0) {
        return Err(Error::domain(OP, format!("beta = {beta} must be positive")));
    }
    if !(d.re >= 0.0) {
        return Err(Error::domain(OP, format!("needs Re d >= 0, got {d}")));
    }
    if !(t >= 0.0 && t <= 1.0) {
        return Err(Error::domain(OP, format!("t = {t} must lie in [0, 1]")));
    }
    if t == 1.0 && d.re == 0.0 {
        return Err(Error::domain(OP, "t = 1 needs Re d > 0 (the fixed regime renormalizes there)"));
    }
    let bp = 0.5 * beta;
    let h = (d + (1.0 - t)).inv() * 0.5;
    let z = [
        [(1.0 / (1.0 - t + 2.0 * d.re) - h.re) / bp, h.im / bp],
        [h.im / bp, h.re / bp],
    ];
    let l = (d + 1.0).ln() - (d + (1.0 - t)).ln();
    let lr = ((1.0 + 2.0 * d.re) / (1.0 - t + 2.0 * d.re)).ln();
    let iz = [
        [(lr - 0.5 * l.re) / bp, 0.5 * l.im / bp],
        [0.5 * l.im / bp, 0.5 * l.re / bp],
    ];
    Ok((z, iz))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_kronrod;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_term_and_zero_delta() {
        let p = EnsembleParams::fixed(50, 1.5, c(0.4, -0.3)).unwrap();
        let v = exact_mean_logphi(&p, 1).unwrap();
        let bp = 0.75;
        let x = bp * 49.0 + 1.0;
        let expect = polygamma(0, c(x + 0.8, 0.0)).unwrap() - polygamma(0, c(x + 0.4, 0.3)).unwrap();
        assert!((v - expect).norm() < 1e-14);
        let p0 = EnsembleParams::fixed(300, 2.0, c(0.0, 0.0)).unwrap();
        for m in [1, 17, 300] {
            assert!(exact_mean_logphi(&p0, m).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn mean_path_matches_pointwise() {
        let p = EnsembleParams::fixed(40, 3.0, c(0.2, 0.5)).unwrap();
        let path = exact_mean_path(&p).unwrap();
        for m in [1, 10, 40] {
            assert!((path[m] - exact_mean_logphi(&p, m).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn abel_plana_matches_direct() {
        for p in [
            EnsembleParams::fixed(100, 2.0, c(0.3, 0.2)).unwrap(),
            EnsembleParams::fixed(1000, 1.0, c(-0.3, 0.7)).unwrap(),
            EnsembleParams::scaled(100, 4.0, c(0.5, 0.5)).unwrap(),
        ] {
            for m in [3, p.n / 2, p.n - 1, p.n] {
                let a = exact_mean_logphi_with(&p, m, Summation::Direct).unwrap();
                let b = exact_mean_logphi_with(&p, m, Summation::AbelPlana).unwrap();
                assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "n={} m={m}: {a} vs {b}", p.n);
                let ca = exact_cov_zeta_with(&p, m, Summation::Direct).unwrap();
                let cb = exact_cov_zeta_with(&p, m, Summation::AbelPlana).unwrap();
                for i in 0..2 {
                    for k in 0..2 {
                        assert!((ca[i][k] - cb[i][k]).abs() < 1e-9 * ca[i][k].abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn covariance_direct_and_real_delta() {
        let p = EnsembleParams::fixed(50, 2.0, c(0.6, 0.0)).unwrap();
        assert_eq!(exact_cov_zeta(&p, 20).unwrap()[0][1], 0.0);
        let p = EnsembleParams::fixed(50, 2.0, c(0.6, -0.4)).unwrap();
        let got = exact_cov_zeta(&p, 20).unwrap();
        let mut brute = [[0.0; 2]; 2];
        for j in 0..20 {
            let cm = cumulants(&CoefficientLaw::new(p.rank_weight(j), p.delta()).unwrap()).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    brute[a][b] += cm.covariance[a][b];
                }
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                assert!((got[a][b] - brute[a][b]).abs() < 1e-12);
            }
        }
        assert_eq!(exact_cov_path(&p).unwrap()[20], brute);
    }

    #[test]
    fn decomposition_sums_to_exact() {
        for p in [
            EnsembleParams::fixed(200, 2.0, c(0.3, 0.2)).unwrap(),
            EnsembleParams::scaled(200, 1.0, c(0.5, 0.0)).unwrap(),
        ] {
            for m in [50, 100, 199] {
                let dcp = mean_decomposition(&p, m).unwrap();
                let exact = exact_mean_logphi_with(&p, m, Summation::Direct).unwrap();
                assert!((dcp.total - exact).norm() < 1e-9 * exact.norm().max(1.0), "{m}");
            }
        }
    }

    #[test]
    fn limit_mean_values() {
        let (e, f) = limit_mean_functions(c(0.5, 0.0), 1.0).unwrap();
        let jj = |u: f64| j(u);
        let expect = jj(2.0) - jj(1.0) - jj(1.5) + jj(0.5);
        assert!((e.re - expect).abs() < 1e-14 && e.im == 0.0 && f.im == 0.0);
        assert!((e.re - 0.43152).abs() < 1e-5);
        let (e, f) = limit_mean_functions(c(0.7, 0.3), 1e-12).unwrap();
        assert!(e.norm() < 1e-10 && f.norm() < 1e-10);
        assert!(limit_mean_e(c(0.0, 1.0), 0.5).is_err());
    }

    #[test]
    fn limit_covariance_values() {
        let (z, iz) = limit_covariance(2.0, c(0.5, 0.0), 0.0).unwrap();
        assert!((z[0][0] - (0.5 - 1.0 / 3.0)).abs() < 1e-15);
        assert!((z[1][1] - 1.0 / 3.0).abs() < 1e-15 && z[0][1] == 0.0);
        assert!(iz.iter().flatten().all(|v| v.abs() < 1e-15));
        let (z0, _) = limit_covariance(3.0, c(0.0, 0.0), 0.4).unwrap();
        assert!((z0[0][0] - 1.0 / (3.0 * 0.6)).abs() < 1e-14 && (z0[1][1] - z0[0][0]).abs() < 1e-14);
        assert!(limit_covariance(2.0, c(0.0, 0.0), 1.0).is_err());
        assert!(limit_covariance(2.0, c(0.0, 0.3), 1.0).is_err());

        let d = c(0.3, 0.4);
        let (_, iz) = limit_covariance(2.0, d, 0.7).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let q = gauss_kronrod(|s| limit_covariance(2.0, d, s).unwrap().0[a][b], 0.0, 0.7, 1e-14, 1e-14)
                    .unwrap();
                assert!((q.value - iz[a][b]).abs() < 1e-10);
            }
        }
        let (_, iz1) = limit_covariance(1.5, d, 1.0).unwrap();
        let trace = iz1[0][0] + iz1[1][1];
        assert!((trace - (1.0 / 0.75) * ((1.0 + 0.6) / 0.6f64).ln()).abs() < 1e-13);
    }

    #[test]
    fn first_regime_mean_trend() {
        let delta = c(0.3, 0.0);
        let t = 0.5;
        let n = 10_000;
        let p = EnsembleParams::fixed(n, 2.0, delta).unwrap();
        let v = exact_mean_logphi(&p, n / 2).unwrap();
        let target = -(delta.re) * (1.0 - t as f64).ln();
        assert!((v.re - target).abs() < 0.01 && (target - 0.20794).abs() < 1e-4);
    }
}
