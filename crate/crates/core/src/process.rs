//! The log-characteristic-polynomial path and its matrix cross-checks.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::EnsembleParams;
use crate::sampler::DeformedVerblunskySample;

/// `values[k] = log Φ_{k,n}(1)` for `k = 0..=n`, built from principal logs of `1 - γ_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogPolyPath {
    pub values: Vec<Complex64>,
    pub params: EnsembleParams,
}

impl LogPolyPath {
    /// `ζ_n` at every index: the path minus its exact mean.
    pub fn centered(&self, mean_path: &[Complex64]) -> Result<Vec<Complex64>> {
        if mean_path.len() != self.values.len() {
            return Err(Error::InvalidParams(format!(
                "mean path has {} entries, path has {}",
                mean_path.len(),
                self.values.len()
            )));
        }
        Ok(self.values.iter().zip(mean_path).map(|(v, m)| v - m).collect())
    }
}

/// Cumulative principal logs `Σ_{j<k} log(1 - γ_j)`, `k = 0..=n`.
pub fn log_path_values(gamma: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(gamma.len() + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for (j, g) in gamma.iter().enumerate() {
        let w = 1.0 - g;
        if w.norm() == 0.0 {
            return Err(Error::Degenerate {
                op: "log_path",
                detail: format!("γ_{j} = 1"),
            });
        }
        acc += w.ln();
        out.push(acc);
    }
    Ok(out)
}

pub fn log_path(sample: &DeformedVerblunskySample) -> Result<LogPolyPath> {
    Ok(LogPolyPath {
        values: log_path_values(&sample.gamma)?,
        params: sample.params,
    })
}

/// Verblunsky coefficients `α_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurCoefficients {
    pub alpha: Vec<Complex64>,
}

/// `α_j = conj(γ_j) · conj(Φ_j(1)) / Φ_j(1)` with `Φ_j(1) = ∏_{k<j} (1 - γ_k)`.
pub fn gamma_to_alpha(gamma: &[Complex64]) -> Result<SchurCoefficients> {
    let mut phi = Complex64::new(1.0, 0.0);
    let mut alpha = Vec::with_capacity(gamma.len());
    for (j, g) in gamma.iter().enumerate() {
        if phi.norm() == 0.0 {
            return Err(Error::Degenerate {
                op: "gamma_to_alpha",
                detail: format!("Φ_{j}(1) vanishes"),
            });
        }
        let phase = phi.conj() / phi;
        alpha.push(g.conj() * (phase / phase.norm()));
        phi *= 1.0 - g;
    }
    Ok(SchurCoefficients { alpha })
}

/// `γ_j = y_j(1) = conj(α_j) Φ*_j(1) / Φ_j(1)`, evaluated through the Szegő recursion.
pub fn alpha_to_gamma(alpha: &SchurCoefficients) -> Result<Vec<Complex64>> {
    let (phi, phi_star) = szego_pair(alpha, Complex64::new(1.0, 0.0));
    alpha
        .alpha
        .iter()
        .enumerate()
        .map(|(j, a)| {
            if phi[j].norm() == 0.0 {
                Err(Error::Degenerate {
                    op: "alpha_to_gamma",
                    detail: format!("Φ_{j}(1) vanishes"),
                })
            } else {
                Ok(a.conj() * phi_star[j] / phi[j])
            }
        })
        .collect()
}

fn szego_pair(alpha: &SchurCoefficients, z: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = alpha.alpha.len();
    let mut phi = Vec::with_capacity(n + 1);
    let mut star = Vec::with_capacity(n + 1);
    let (mut p, mut s) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    phi.push(p);
    star.push(s);
    for a in &alpha.alpha {
        let np = z * p - a.conj() * s;
        let ns = s - a * z * p;
        p = np;
        s = ns;
        phi.push(p);
        star.push(s);
    }
    (phi, star)
}

/// Monic orthogonal polynomials `Φ_k(z)`, `k = 0..=n`, by the Szegő recursion.
pub fn szego_eval(alpha: &SchurCoefficients, z: Complex64) -> Vec<Complex64> {
    szego_pair(alpha, z).0
}

/// The `n × n` GGT (Hessenberg) matrix of multiplication by `z` in the
/// orthonormal basis.
pub fn ggt_matrix(alpha: &SchurCoefficients) -> DMatrix<Complex64> {
    let a = &alpha.alpha;
    let n = a.len();
    let rho: Vec<f64> = a.iter().map(|x| (1.0 - x.norm_sqr()).max(0.0).sqrt()).collect();
    let prev = |i: usize| {
        if i == 0 {
            Complex64::new(-1.0, 0.0)
        } else {
            a[i - 1]
        }
    };
    DMatrix::from_fn(n, n, |i, j| {
        if i <= j {
            let prod: f64 = rho[i..j].iter().product();
            -a[j].conj() * prev(i) * prod
        } else if i == j + 1 {
            Complex64::new(rho[j], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `det(I_k - G_k)` by LU.
pub fn ggt_det(alpha: &SchurCoefficients, k: usize) -> Result<Complex64> {
    let g = top_left(alpha, k, "ggt_det")?;
    let m = DMatrix::<Complex64>::identity(k, k) - g;
    Ok(m.lu().determinant())
}

fn top_left(alpha: &SchurCoefficients, k: usize, op: &'static str) -> Result<DMatrix<Complex64>> {
    let n = alpha.alpha.len();
    if k == 0 || k > n {
        return Err(Error::domain(op, format!("k = {k} must lie in 1..={n}")));
    }
    Ok(ggt_matrix(alpha).view((0, 0), (k, k)).into_owned())
}

/// `log det(I_k - G_k) = Σ log(1 - λ_i)` over the eigenvalues of the top-left block.
pub fn ggt_check(alpha: &SchurCoefficients, k: usize) -> Result<Complex64> {
    const OP: &str = "ggt_check";
    let g = top_left(alpha, k, OP)?;
    let eig = g
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Degenerate {
            op: OP,
            detail: "eigenvalue computation failed".into(),
        })?;
    let mut acc = Complex64::new(0.0, 0.0);
    for lam in eig.iter() {
        let w = 1.0 - lam;
        if w.norm() < 1e-12 || (w.re <= 0.0 && w.im.abs() < 1e-14) {
            return Err(Error::Degenerate {
                op: OP,
                detail: format!("eigenvalue {lam} on [1, ∞)"),
            });
        }
        acc += w.ln();
    }
    Ok(acc)
}
