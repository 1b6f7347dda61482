//! Deterministic parallel Monte Carlo.
//!
//! Every unit of work is keyed by its index and writes into its own slot, so
//! results do not depend on the number of workers.

use num_complex::Complex64;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::gamma_law::{cumulants, CoefficientLaw};
use crate::params::EnsembleParams;
use crate::process::{log_path, log_path_values, LogPolyPath};
use crate::sampler::{derive_seed, sample_ensemble, sample_gamma_circle, sample_gamma_disc, RandomStream};
use crate::stats::{ks_critical_1pct, ks_statistic, mean_se, variance_se, Moments2};

/// Evaluates `job(i)` for `i < count` on `workers` threads, in index order.
pub fn run_indexed<T, F>(count: usize, workers: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::InvalidParams("workers must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            return pool.install(|| (0..count).into_par_iter().map(&job).collect());
        }
    }
    (0..count).map(job).collect()
}

/// Seed of sample `index` under master seed `seed`.
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, index as u64)
}

/// `samples` independent log-polynomial paths.
pub fn sample_paths(params: &EnsembleParams, samples: usize, seed: u64, workers: usize) -> Result<Vec<LogPolyPath>> {
    run_indexed(samples, workers, |i| log_path(&sample_ensemble(params, sample_seed(seed, i))?))
}

/// `log Φ_n(1)` for each of `samples` draws, without keeping the paths.
pub fn sample_endpoints(params: &EnsembleParams, samples: usize, seed: u64, workers: usize) -> Result<Vec<Complex64>> {
    run_indexed(samples, workers, |i| {
        let s = sample_ensemble(params, sample_seed(seed, i))?;
        Ok(*log_path_values(&s.gamma)?.last().expect("path has n + 1 entries"))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub samples: usize,
    /// `(mean, standard error)` of the real and imaginary parts of `Θ`.
    pub mean: [(f64, f64); 2],
    /// `(variance, standard error)` per component.
    pub variance: [(f64, f64); 2],
    /// The limiting per-component variance `1/β`.
    pub target_variance: f64,
    pub ks: [f64; 2],
    pub ks_critical_1pct: f64,
}

impl CltReport {
    /// Variances within `rel` of the target and means within `k` standard errors of zero.
    pub fn passes(&self, rel: f64, k: f64) -> bool {
        self.variance.iter().all(|(v, _)| (v / self.target_variance - 1.0).abs() <= rel)
            && self.mean.iter().all(|(m, se)| m.abs() <= k * se)
    }
}

/// `Θ = (log Φ_n(1) - (δ/β′) log n)/√(log n)` for fixed-δ ensembles.
pub fn clt_statistics(params: &EnsembleParams, samples: usize, seed: u64, workers: usize) -> Result<(Vec<Complex64>, CltReport)> {
    if samples < 2 || params.n < 2 {
        return Err(Error::InvalidParams("need at least two samples and n >= 2".into()));
    }
    let logn = (params.n as f64).ln();
    let shift = params.delta() / params.beta_prime() * logn;
    let theta: Vec<Complex64> = sample_endpoints(params, samples, seed, workers)?
        .into_iter()
        .map(|v| (v - shift) / logn.sqrt())
        .collect();
    let target = 1.0 / params.beta;
    let sd = target.sqrt();
    let normal = Normal::new(0.0, sd).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let re: Vec<f64> = theta.iter().map(|z| z.re).collect();
    let im: Vec<f64> = theta.iter().map(|z| z.im).collect();
    let report = CltReport {
        samples,
        mean: [mean_se(&re), mean_se(&im)],
        variance: [variance_se(&re), variance_se(&im)],
        target_variance: target,
        ks: [ks_statistic(&re, |x| normal.cdf(x)), ks_statistic(&im, |x| normal.cdf(x))],
        ks_critical_1pct: ks_critical_1pct(samples),
    };
    Ok((theta, report))
}

/// Draws per chunk in [`coefficient_moments`]; fixed so that chunking never depends on workers.
pub const CHUNK: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct MomentComparison {
    pub draws: usize,
    pub empirical: Moments2,
    pub exact_mean: Complex64,
    pub exact_covariance: [[f64; 2]; 2],
    /// `|empirical - exact|/SE` for the two means and the three covariance entries.
    pub z_scores: [f64; 5],
}

impl MomentComparison {
    pub fn max_z(&self) -> f64 {
        self.z_scores.iter().cloned().fold(0.0, f64::max)
    }
}

/// Monte Carlo mean and covariance of `log(1 - γ)` against the exact cumulants.
pub fn coefficient_moments(law: &CoefficientLaw, draws: usize, seed: u64, workers: usize) -> Result<MomentComparison> {
    let chunks = draws.div_ceil(CHUNK);
    let parts = run_indexed(chunks, workers, |c| {
        let mut stream = RandomStream::new(seed, c as u64);
        let len = CHUNK.min(draws - c * CHUNK);
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let g = if law.is_circle() {
                sample_gamma_circle(law.delta, &mut stream)?
            } else {
                sample_gamma_disc(law.r, law.delta, &mut stream)?
            };
            out.push((1.0 - g).ln());
        }
        Ok(out)
    })?;
    let xs: Vec<Complex64> = parts.into_iter().flatten().collect();
    let m = Moments2::from_complex(&xs);
    let exact = cumulants(law)?;
    let se = m.mean_se();
    let re: Vec<f64> = xs.iter().map(|z| z.re).collect();
    let im: Vec<f64> = xs.iter().map(|z| z.im).collect();
    let (_, se_vr) = variance_se(&re);
    let (_, se_vi) = variance_se(&im);
    // standard error of the sample covariance from the centred products
    let cross: Vec<f64> = xs.iter().map(|z| (z.re - m.mean[0]) * (z.im - m.mean[1])).collect();
    let (_, se_c) = mean_se(&cross);
    let z = [
        (m.mean[0] - exact.mean.re).abs() / se[0],
        (m.mean[1] - exact.mean.im).abs() / se[1],
        (m.covariance[0][0] - exact.covariance[0][0]).abs() / se_vr,
        (m.covariance[1][1] - exact.covariance[1][1]).abs() / se_vi,
        (m.covariance[0][1] - exact.covariance[0][1]).abs() / se_c,
    ];
    Ok(MomentComparison {
        draws: xs.len(),
        empirical: m,
        exact_mean: exact.mean,
        exact_covariance: exact.covariance,
        z_scores: z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_matter() {
        let p = EnsembleParams::fixed(64, 2.0, Complex64::new(0.5, 0.2)).unwrap();
        let a = sample_paths(&p, 9, 11, 1).unwrap();
        let b = sample_paths(&p, 9, 11, 4).unwrap();
        assert_eq!(a, b);
        assert!(run_indexed(3, 0, Ok).is_err());
    }

    #[test]
    fn moments_small_run() {
        let law = CoefficientLaw::new(3.0, Complex64::new(0.5, 0.0)).unwrap();
        let m = coefficient_moments(&law, 50_000, 5, 2).unwrap();
        assert_eq!(m.draws, 50_000);
        assert!(m.max_z() < 5.0, "{:?}", m.z_scores);
    }
}
