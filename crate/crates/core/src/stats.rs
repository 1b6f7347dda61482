//! Small statistics helpers used by the Monte Carlo checks.

use num_complex::Complex64;
use serde::Serialize;

/// Running mean and covariance of a two-dimensional sample.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Moments2 {
    pub count: usize,
    pub mean: [f64; 2],
    pub covariance: [[f64; 2]; 2],
}

impl Moments2 {
    /// Two-pass estimate from complex samples (real part, imaginary part).
    pub fn from_complex(xs: &[Complex64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self::default();
        }
        let nf = n as f64;
        let mr = xs.iter().map(|z| z.re).sum::<f64>() / nf;
        let mi = xs.iter().map(|z| z.im).sum::<f64>() / nf;
        let (mut srr, mut sii, mut sri) = (0.0, 0.0, 0.0);
        for z in xs {
            let (a, b) = (z.re - mr, z.im - mi);
            srr += a * a;
            sii += b * b;
            sri += a * b;
        }
        let denom = (nf - 1.0).max(1.0);
        Moments2 {
            count: n,
            mean: [mr, mi],
            covariance: [[srr / denom, sri / denom], [sri / denom, sii / denom]],
        }
    }

    /// Standard errors of the two means.
    pub fn mean_se(&self) -> [f64; 2] {
        let n = self.count as f64;
        [(self.covariance[0][0] / n).sqrt(), (self.covariance[1][1] / n).sqrt()]
    }
}

/// Mean and standard error of a real sample.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

/// Unbiased sample variance and the standard error of that variance estimate
/// (from the sample fourth central moment).
pub fn variance_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    let se = ((m4 - v * v * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt();
    (v, se)
}

/// Kolmogorov–Smirnov distance between the empirical law of `xs` and `cdf`.
pub fn ks_statistic(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in v.iter().enumerate() {
        let f = cdf(*x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Pearson correlation of two equally long samples.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}
