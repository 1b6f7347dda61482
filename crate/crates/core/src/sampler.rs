//! Exact samplers for deformed Verblunsky coefficients.
//!
//! Both samplers draw from the `δ = 0` law and accept with probability
//! `w(z)/M`, where `w` is the deformation weight and `M` its supremum
//! (finite because `Re δ >= 0`).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// Proposals allowed per draw before giving up.
pub const ITERATION_CAP: u64 = 1_000_000;

/// Deterministic random stream keyed by `(seed, substream)`.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, substream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(substream);
        RandomStream { rng }
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.random::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// splitmix64 finalizer, used to derive per-sample seeds from a master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_delta(op: &'static str, delta: Complex64) -> Result<()> {
    if !(delta.re >= 0.0) || !delta.im.is_finite() || !delta.re.is_finite() {
        return Err(Error::domain(op, format!("sampling needs Re δ >= 0, got {delta}")));
    }
    Ok(())
}

fn log_envelope(delta: Complex64) -> f64 {
    2.0 * delta.re * LN_2 + PI * delta.im.abs()
}

/// A draw together with the number of proposals it took.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub value: Complex64,
    pub proposals: u64,
}

fn rejection(
    delta: Complex64,
    stream: &mut RandomStream,
    mut propose: impl FnMut(&mut RandomStream) -> Option<(Complex64, f64)>,
) -> Result<Draw> {
    let log_m = log_envelope(delta);
    let mut ratio_sum = 0.0;
    for k in 1..=ITERATION_CAP {
        let Some((z, log_w)) = propose(stream) else {
            continue;
        };
        let ratio = (log_w - log_m).exp();
        ratio_sum += ratio;
        if stream.uniform() < ratio {
            return Ok(Draw {
                value: z,
                proposals: k,
            });
        }
    }
    Err(Error::IterationCap {
        cap: ITERATION_CAP,
        acceptance: ratio_sum / ITERATION_CAP as f64,
    })
}

/// Draw from the disc law with rank weight `r > 0`; also reports proposals used.
pub fn sample_gamma_disc_counted(r: f64, delta: Complex64, stream: &mut RandomStream) -> Result<Draw> {
    const OP: &str = "sample_gamma_disc";
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(OP, format!("r = {r} must be positive")));
    }
    check_delta(OP, delta)?;
    rejection(delta, stream, |s| {
        // |z|² ~ Beta(1, r) by inversion, angle uniform
        let u = -((-s.uniform()).ln_1p() / r).exp_m1();
        let theta = 2.0 * PI * s.uniform();
        if !(u < 1.0) {
            return None;
        }
        let z = Complex64::from_polar(u.sqrt(), theta);
        let w = 1.0 - z;
        // |1-z|^{2Re δ} exp(2 Im δ arg(1-z))
        let log_w = 2.0 * delta.re * w.norm().ln() + 2.0 * delta.im * w.arg();
        Some((z, log_w))
    })
}

/// Draw from the disc law with rank weight `r > 0` and deformation `δ`, `Re δ >= 0`.
pub fn sample_gamma_disc(r: f64, delta: Complex64, stream: &mut RandomStream) -> Result<Complex64> {
    sample_gamma_disc_counted(r, delta, stream).map(|d| d.value)
}

pub fn sample_gamma_circle_counted(delta: Complex64, stream: &mut RandomStream) -> Result<Draw> {
    check_delta("sample_gamma_circle", delta)?;
    rejection(delta, stream, |s| {
        let theta = 2.0 * PI * s.uniform();
        let log_w = 2.0 * delta.re * (2.0 * (0.5 * theta).sin()).ln() + delta.im * (theta - PI);
        Some((Complex64::from_polar(1.0, theta), log_w))
    })
}

/// Draw from the circle law, `Re δ >= 0`.
pub fn sample_gamma_circle(delta: Complex64, stream: &mut RandomStream) -> Result<Complex64> {
    sample_gamma_circle_counted(delta, stream).map(|d| d.value)
}

/// One draw of all `n` deformed Verblunsky coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformedVerblunskySample {
    pub gamma: Vec<Complex64>,
    pub seed: u64,
    pub params: EnsembleParams,
}

/// Sample the whole ensemble; coefficient `j` uses substream `j` of `seed`.
pub fn sample_ensemble(params: &EnsembleParams, seed: u64) -> Result<DeformedVerblunskySample> {
    let delta = params.delta();
    check_delta("sample_ensemble", delta)?;
    let n = params.n;
    let mut gamma = Vec::with_capacity(n);
    for j in 0..n {
        let mut stream = RandomStream::new(seed, j as u64);
        let g = if j + 1 == n {
            sample_gamma_circle(delta, &mut stream)?
        } else {
            sample_gamma_disc(params.rank_weight(j), delta, &mut stream)?
        };
        gamma.push(g);
    }
    Ok(DeformedVerblunskySample {
        gamma,
        seed,
        params: *params,
    })
}
