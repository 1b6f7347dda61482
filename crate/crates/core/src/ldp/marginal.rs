//! The marginal rate `h_d(T, ξ, η)` and its optimal trajectories.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64;
use serde::Serialize;

use super::cgf::{check_horizon, jdiff, l0, l0_gradient, l0_hessian};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::quad::gauss_kronrod;
use crate::specfun::entropy::j;

/// Where the marginal rate is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub horizon: f64,
    pub xi: f64,
    pub eta: f64,
    pub d: Complex64,
}

impl RatePoint {
    pub fn new(horizon: f64, xi: f64, eta: f64, d: Complex64) -> Result<Self> {
        if !(horizon > 0.0 && horizon <= 1.0) {
            return Err(Error::InvalidParams(format!("T = {horizon} must lie in (0, 1]")));
        }
        if !xi.is_finite() || !eta.is_finite() || !d.re.is_finite() || !d.im.is_finite() {
            return Err(Error::InvalidParams("non-finite rate point".into()));
        }
        if d.re < 0.0 {
            return Err(Error::InvalidParams(format!("Re d = {} must be non-negative", d.re)));
        }
        if d == Complex64::new(0.0, 0.0) && horizon == 1.0 {
            return Err(Error::InvalidParams("d = 0 requires T < 1".into()));
        }
        Ok(RatePoint { horizon, xi, eta, d })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Interior,
    LinearExtension,
    Infinite,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Interior => "interior",
            Branch::LinearExtension => "linear",
            Branch::Infinite => "infinite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalRateResult {
    pub value: ExtendedReal,
    pub branch: Branch,
    /// `(γ, ρ)` of the optimal trajectory, on the interior branch.
    pub multipliers: Option<(f64, f64)>,
}

/// `ξ_T = 𝒥(T) - 1 - 𝒥((1+T)/2) + 𝒥((1-T)/2)`.
pub fn xi_boundary(horizon: f64) -> Result<f64> {
    check_horizon("xi_boundary", horizon)?;
    Ok(j(horizon) - 1.0 - j(0.5 * (1.0 + horizon)) + j(0.5 * (1.0 - horizon)))
}

/// Left side of the implicit equation, `∂𝓛_0/∂s (T, γ, 0)`.
pub fn implicit_map(horizon: f64, gamma: f64) -> f64 {
    let c = 1.0 - horizon;
    jdiff(1.0 + gamma, c + gamma) - jdiff(1.0 + 0.5 * gamma, c + 0.5 * gamma)
}

fn implicit_slope(horizon: f64, gamma: f64) -> f64 {
    let c = 1.0 - horizon;
    (horizon / (c + gamma)).ln_1p() - 0.5 * (horizon / (c + 0.5 * gamma)).ln_1p()
}

/// The unique `γ > -(1-T)` with `implicit_map(T, γ) = ξ`, for `ξ ∈ [ξ_T, T log 2)`.
pub fn solve_implicit_gamma(horizon: f64, xi: f64) -> Result<f64> {
    const OP: &str = "solve_implicit_gamma";
    let lo0 = -(1.0 - horizon);
    let xi_t = xi_boundary(horizon)?;
    if !(xi >= xi_t && xi < horizon * LN_2) {
        return Err(Error::domain(OP, format!("ξ = {xi} outside [{xi_t}, {})", horizon * LN_2)));
    }
    if xi == xi_t {
        return Ok(lo0);
    }
    let mut lo = lo0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while implicit_map(horizon, hi) <= xi {
        lo = hi;
        hi = 2.0 * hi + 1.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoConvergence {
                op: OP,
                iterations: doublings,
                residual: xi - implicit_map(horizon, hi),
            });
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if implicit_map(horizon, mid) < xi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
    }
    let mut g = 0.5 * (lo + hi);
    for _ in 0..4 {
        let slope = implicit_slope(horizon, g);
        if !(slope > 0.0) || !slope.is_finite() {
            break;
        }
        let next = g - (implicit_map(horizon, g) - xi) / slope;
        if next > lo0 && next.is_finite() {
            g = next;
        }
    }
    Ok(g)
}

/// `h_0(T, ξ, 0)` with its branch; no check on `(d, T)`.
fn h0_axis(horizon: f64, xi: f64) -> Result<MarginalRateResult> {
    if xi >= horizon * LN_2 {
        return Ok(MarginalRateResult {
            value: ExtendedReal::PosInfinity,
            branch: Branch::Infinite,
            multipliers: None,
        });
    }
    let xi_t = xi_boundary(horizon)?;
    if xi >= xi_t {
        let gamma = solve_implicit_gamma(horizon, xi)?;
        return Ok(MarginalRateResult {
            value: ExtendedReal::Finite(gamma * xi - l0(horizon, gamma, 0.0)),
            branch: Branch::Interior,
            multipliers: Some((gamma, 0.0)),
        });
    }
    let c = 1.0 - horizon;
    let at_boundary = -c * xi_t - l0(horizon, -c, 0.0);
    Ok(MarginalRateResult {
        value: ExtendedReal::Finite(at_boundary + c * (xi_t - xi)),
        branch: Branch::LinearExtension,
        multipliers: None,
    })
}

/// Minimizes `𝓛_0(T, γ, ρ) - γξ - ρη` over `γ > -(1-T)` by damped Newton,
/// switching to full steps once the gradient is small.
fn interior_solve(horizon: f64, xi: f64, eta: f64, seed: [f64; 2]) -> Result<(f64, f64)> {
    const OP: &str = "marginal_rate_h";
    const MAX_ITER: usize = 200;
    let lo = -(1.0 - horizon);
    let objective = |g: f64, r: f64| l0(horizon, g, r) - g * xi - r * eta;
    let (mut g, mut r) = (seed[0], seed[1]);
    let mut val = objective(g, r);
    let mut best = (g, r, f64::INFINITY);
    let mut stalls = 0;
    for _ in 0..MAX_ITER {
        let grad = l0_gradient(horizon, g, r);
        let e = [grad[0] - xi, grad[1] - eta];
        let res = e[0].hypot(e[1]);
        if res < best.2 {
            best = (g, r, res);
            stalls = 0;
        } else {
            stalls += 1;
        }
        if res < 1e-14 || stalls >= 6 {
            break;
        }
        let h = l0_hessian(horizon, g, r);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let newton = det > 0.0 && h[0][0] > 0.0;
        let mut step = if newton {
            [-(h[1][1] * e[0] - h[0][1] * e[1]) / det, -(h[0][0] * e[1] - h[1][0] * e[0]) / det]
        } else {
            [-e[0], -e[1]]
        };
        if step[0] * e[0] + step[1] * e[1] >= 0.0 {
            step = [-e[0], -e[1]];
        }
        if newton && res < 1e-6 && g + step[0] > lo {
            g += step[0];
            r += step[1];
            val = objective(g, r);
            continue;
        }
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..80 {
            let ng = g + t * step[0];
            let nr = r + t * step[1];
            if ng > lo {
                let nv = objective(ng, nr);
                if nv <= val + 1e-15 * val.abs().max(1.0) {
                    g = ng;
                    r = nr;
                    val = nv;
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved || g.abs() > 1e12 || r.abs() > 1e12 {
            break;
        }
    }
    // gradients of 𝓛_0 lose absolute accuracy in proportion to the multipliers
    let scale = 1.0 + best.0.abs() + best.1.abs();
    if best.2 < 1e-10 * scale {
        return Ok((best.0, best.1));
    }
    Err(Error::NoConvergence {
        op: OP,
        iterations: MAX_ITER,
        residual: best.2,
    })
}

/// Upper edge of the effective domain of `h_0(T, ·, η)`: `T log(2 cos(η/T))`.
pub fn xi_upper(horizon: f64, eta: f64) -> f64 {
    if eta.abs() >= horizon * FRAC_PI_2 {
        return f64::NEG_INFINITY;
    }
    horizon * (2.0 * (eta / horizon).cos()).ln()
}

/// The `ρ` with `∂𝓛_0/∂t (T, -(1-T), ρ) = η`, for `|η| < Tπ/2`.
fn boundary_rho(horizon: f64, eta: f64) -> Result<f64> {
    let lo = -(1.0 - horizon);
    let map = |r: f64| l0_gradient(horizon, lo, r)[1];
    if eta == 0.0 {
        return Ok(0.0);
    }
    let mut bound = 1.0f64;
    let mut doublings = 0;
    while (map(bound.copysign(eta)) - eta) * eta.signum() < 0.0 {
        bound *= 2.0;
        doublings += 1;
        if doublings > 1000 {
            return Err(Error::NoConvergence {
                op: "marginal_rate_h",
                iterations: doublings,
                residual: eta - map(bound.copysign(eta)),
            });
        }
    }
    let (mut a, mut b) = if eta > 0.0 { (0.0, bound) } else { (-bound, 0.0) };
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if map(mid) < eta {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// `h_0(T, ξ, η)` with its branch; no check on `(d, T)`.
fn h0_plane(horizon: f64, xi: f64, eta: f64) -> Result<MarginalRateResult> {
    if eta == 0.0 {
        return h0_axis(horizon, xi);
    }
    if xi >= xi_upper(horizon, eta) {
        return Ok(MarginalRateResult {
            value: ExtendedReal::PosInfinity,
            branch: Branch::Infinite,
            multipliers: None,
        });
    }
    // the supremum sits on γ = -(1-T) when ξ is below the slope there
    let lo = -(1.0 - horizon);
    let rho_b = boundary_rho(horizon, eta)?;
    if xi <= l0_gradient(horizon, lo, rho_b)[0] {
        return Ok(MarginalRateResult {
            value: ExtendedReal::Finite(lo * xi + rho_b * eta - l0(horizon, lo, rho_b)),
            branch: Branch::LinearExtension,
            multipliers: None,
        });
    }
    let seed = match h0_axis(horizon, xi)?.multipliers {
        Some((gamma, _)) => [gamma.max(lo + 1e-3 * horizon), rho_b],
        None => [lo + 0.5 * horizon, rho_b],
    };
    let (g, r) = interior_solve(horizon, xi, eta, seed)?;
    Ok(MarginalRateResult {
        value: ExtendedReal::Finite(g * xi + r * eta - l0(horizon, g, r)),
        branch: Branch::Interior,
        multipliers: Some((g, r)),
    })
}

/// The marginal rate `h_d(T, ξ, η)`.
///
/// Computed as `h_0(T, ξ, η) - 2Re d ξ - 2Im d η - 𝒞_d(T)`, where `h_0` is the
/// Legendre transform of `𝓛_0` over the closed half-plane `γ >= -(1-T)`.
/// The reported multipliers are those of `h_0`.
pub fn marginal_rate_h(point: RatePoint) -> Result<MarginalRateResult> {
    let RatePoint { horizon, xi, eta, d } = RatePoint::new(point.horizon, point.xi, point.eta, point.d)?;
    let base = h0_plane(horizon, xi, eta)?;
    let shift = -2.0 * d.re * xi - 2.0 * d.im * eta + l0(horizon, 2.0 * d.re, 2.0 * d.im);
    Ok(MarginalRateResult {
        value: match base.value {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v + shift),
            inf => inf,
        },
        ..base
    })
}

/// Optimal derivatives `(φ̇, ψ̇)` for multipliers `(γ, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    pub horizon: f64,
    pub gamma: f64,
    pub rho: f64,
}

pub fn optimal_trajectory(horizon: f64, gamma: f64, rho: f64) -> Result<Trajectory> {
    check_horizon("optimal_trajectory", horizon)?;
    if !(gamma > -(1.0 - horizon)) || !rho.is_finite() {
        return Err(Error::domain("optimal_trajectory", format!("γ = {gamma} must exceed -(1-T)")));
    }
    Ok(Trajectory { horizon, gamma, rho })
}

impl Trajectory {
    pub fn phi_dot(&self, tau: f64) -> f64 {
        let u = 1.0 - tau;
        let h = u + 0.5 * self.gamma;
        (u + self.gamma).ln() - 0.5 * (h * h + 0.25 * self.rho * self.rho).ln()
    }

    pub fn psi_dot(&self, tau: f64) -> f64 {
        (self.rho / (2.0 * (1.0 - tau) + self.gamma)).atan()
    }

    /// `(∫φ̇, ∫ψ̇)` over `[0, T]`.
    pub fn endpoints(&self) -> Result<(f64, f64)> {
        let a = gauss_kronrod(|tau| self.phi_dot(tau), 0.0, self.horizon, 1e-14, 1e-13)?;
        let b = gauss_kronrod(|tau| self.psi_dot(tau), 0.0, self.horizon, 1e-14, 1e-13)?;
        Ok((a.value, b.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldp::cgf::{cgf_l0, constant_c, path_action_h0, SingularAtom};

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn h(horizon: f64, xi: f64, eta: f64, d: Complex64) -> MarginalRateResult {
        marginal_rate_h(RatePoint::new(horizon, xi, eta, d).unwrap()).unwrap()
    }

    fn golden_sup(horizon: f64, xi: f64) -> f64 {
        let obj = |g: f64| g * xi - cgf_l0(horizon, g, 0.0).unwrap();
        let lo = -(1.0 - horizon);
        let grid: Vec<f64> = (0..=4000).map(|k| lo + 1e-12 + k as f64 * 0.01).collect();
        let k = (0..grid.len()).max_by(|&a, &b| obj(grid[a]).total_cmp(&obj(grid[b]))).unwrap();
        let (mut a, mut b) = (grid[k.saturating_sub(1)], grid[(k + 1).min(grid.len() - 1)]);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let e = a + phi * (b - a);
            if obj(c) > obj(e) {
                b = e;
            } else {
                a = c;
            }
        }
        obj(0.5 * (a + b))
    }

    #[test]
    fn mean_point() {
        let r = h(0.5, 0.0, 0.0, zero());
        assert_eq!(r.branch, Branch::Interior);
        assert!(r.value.finite().unwrap().abs() < 1e-15);
        let (g, rho) = r.multipliers.unwrap();
        assert!(g.abs() < 1e-12 && rho == 0.0);
    }

    #[test]
    fn infinite_branch() {
        let r = h(0.5, 0.5 * LN_2, 0.0, zero());
        assert_eq!(r.branch, Branch::Infinite);
        assert_eq!(r.value, ExtendedReal::PosInfinity);
        assert_eq!(h(0.5, 0.0, 0.8, zero()).branch, Branch::Infinite);
        assert!(RatePoint::new(1.0, 0.0, 0.0, zero()).is_err());
    }

    #[test]
    fn duality_closure() {
        let mut count = 0;
        for horizon in [0.2, 0.4, 0.6, 0.8, 0.95] {
            let xi_t = xi_boundary(horizon).unwrap();
            let top = horizon * LN_2 - 0.05;
            for k in 0..10 {
                let xi = xi_t + (top - xi_t) * (k as f64 + 0.5) / 10.0;
                let r = h(horizon, xi, 0.0, zero());
                assert_eq!(r.branch, Branch::Interior);
                let v = r.value.finite().unwrap();
                let sup = golden_sup(horizon, xi);
                assert!((v - sup).abs() < 1e-8, "T={horizon} ξ={xi}: {v} vs {sup}");
                count += 1;
            }
        }
        assert_eq!(count, 50);
    }

    #[test]
    fn linear_branch_and_continuity() {
        let horizon = 0.5;
        let xi_t = xi_boundary(horizon).unwrap();
        let at = h(horizon, xi_t, 0.0, zero()).value.finite().unwrap();
        let below = h(horizon, xi_t - 0.3, 0.0, zero());
        assert_eq!(below.branch, Branch::LinearExtension);
        assert!((below.value.finite().unwrap() - (at + 0.5 * 0.3)).abs() < 1e-12);
        let eps = 1e-7;
        let left = h(horizon, xi_t - eps, 0.0, zero()).value.finite().unwrap();
        let right = h(horizon, xi_t + eps, 0.0, zero()).value.finite().unwrap();
        assert!((left - at).abs() < 1e-6 && (right - at).abs() < 1e-6);
        assert!(((left - at) / -eps + (1.0 - horizon)).abs() < 1e-6);
    }

    #[test]
    fn linear_branch_path_cost() {
        // optimal path up to ξ_T followed by a downward atom at T
        let horizon = 0.5;
        let xi_t = xi_boundary(horizon).unwrap();
        let traj = optimal_trajectory(horizon, -(1.0 - horizon) + 1e-13, 0.0).unwrap();
        let atoms = [SingularAtom { location: horizon, mass: -0.3 }];
        let cost = path_action_h0(horizon, |t| traj.phi_dot(t), |_| 0.0, &atoms).unwrap();
        let want = h(horizon, xi_t - 0.3, 0.0, zero()).value.finite().unwrap();
        assert!((cost.finite().unwrap() - want).abs() < 1e-6, "{cost} {want}");
    }

    #[test]
    fn implicit_equation_is_the_cgf_slope() {
        let step = 1e-5;
        for (horizon, gamma) in [(0.5, -0.3), (0.5, 2.0), (0.9, 0.1)] {
            let fd = (cgf_l0(horizon, gamma + step, 0.0).unwrap() - cgf_l0(horizon, gamma - step, 0.0).unwrap())
                / (2.0 * step);
            assert!((fd - implicit_map(horizon, gamma)).abs() < 1e-8);
        }
    }

    #[test]
    fn trajectories_hit_endpoints() {
        let tr = optimal_trajectory(0.5, 0.0, 0.0).unwrap();
        assert_eq!(tr.phi_dot(0.3), 0.0);
        assert_eq!(tr.psi_dot(0.3), 0.0);
        let tr = optimal_trajectory(0.5, 0.4, 0.7).unwrap();
        assert!((tr.psi_dot(0.0) - (0.7f64 / 2.4).atan()).abs() < 1e-16);
        for (horizon, xi, eta) in [(0.5, 0.1, 0.0), (0.5, -0.2, 0.15), (0.8, 0.05, -0.3)] {
            let r = h(horizon, xi, eta, zero());
            let (g, rho) = r.multipliers.unwrap();
            let (a, b) = optimal_trajectory(horizon, g, rho).unwrap().endpoints().unwrap();
            assert!((a - xi).abs() < 1e-8 && (b - eta).abs() < 1e-8, "{a} {b}");
        }
    }

    #[test]
    fn shift_identity_grid() {
        let horizon = 0.5;
        for d in [Complex64::new(0.3, 0.2), Complex64::new(0.7, 0.0), Complex64::new(0.0, -0.4)] {
            let want = -constant_c(d, horizon).unwrap();
            for xi in [-0.3, -0.15, 0.0, 0.1, 0.2] {
                for eta in [-0.2, -0.1, 0.0, 0.1, 0.2] {
                    let hd = h(horizon, xi, eta, d).value.finite().unwrap();
                    let h0 = h(horizon, xi, eta, zero()).value.finite().unwrap();
                    let lhs = hd - h0 + 2.0 * d.re * xi + 2.0 * d.im * eta;
                    assert!((lhs - want).abs() < 1e-10, "d={d} ξ={xi} η={eta}: {lhs} vs {want}");
                }
            }
        }
    }

    /// Brute-force supremum of `γξ + ρη - 𝓛_0` over a fine grid on `γ >= -(1-T)`.
    fn grid_sup(horizon: f64, xi: f64, eta: f64) -> f64 {
        let lo = -(1.0 - horizon);
        let mut best = f64::MIN;
        for i in 0..=400 {
            let g = lo + 6.0 * (i as f64 / 400.0).powi(2);
            for k in 0..=400 {
                let r = -8.0 + 16.0 * k as f64 / 400.0;
                best = best.max(g * xi + r * eta - l0(horizon, g, r));
            }
        }
        best
    }

    #[test]
    fn off_axis_branches_match_brute_force() {
        for (horizon, xi, eta) in [(0.5, -1.0, 0.1), (0.5, 0.0, -0.1), (0.7, 0.2, 0.3), (1.0, -0.5, 0.4), (0.3, -0.2, -0.2)] {
            let r = h0_plane(horizon, xi, eta).unwrap();
            let v = r.value.finite().unwrap();
            let b = grid_sup(horizon, xi, eta);
            assert!(v >= b - 1e-9 && v - b < 2e-3, "T={horizon} ξ={xi} η={eta}: {v} vs grid {b} ({:?})", r.branch);
        }
        let r = marginal_rate_h(RatePoint::new(0.5, 0.3, 0.5, Complex64::new(0.2, 0.0)).unwrap()).unwrap();
        assert_eq!(r.branch, Branch::Infinite);
    }

    #[test]
    fn off_axis_is_continuous() {
        for horizon in [0.4, 0.8, 1.0] {
            let d = Complex64::new(0.3, -0.2);
            for xi in [-1.5, -0.4, 0.0, 0.2] {
                let at = |eta: f64| marginal_rate_h(RatePoint::new(horizon, xi, eta, d).unwrap()).unwrap().value.finite().unwrap();
                assert!((at(1e-7) - at(0.0)).abs() < 1e-5, "T={horizon} ξ={xi}");
                assert!((at(-1e-7) - at(0.0)).abs() < 1e-5, "T={horizon} ξ={xi}");
            }
            // across the switch from the boundary to the interior
            let eta = 0.2;
            let lo = -(1.0 - horizon);
            let rho = boundary_rho(horizon, eta).unwrap();
            let edge = l0_gradient(horizon, lo, rho)[0];
            let below = marginal_rate_h(RatePoint::new(horizon, edge - 1e-7, eta, d).unwrap()).unwrap();
            let above = marginal_rate_h(RatePoint::new(horizon, edge + 1e-7, eta, d).unwrap()).unwrap();
            assert_eq!(below.branch, Branch::LinearExtension);
            assert_eq!(above.branch, Branch::Interior);
            assert!((below.value.finite().unwrap() - above.value.finite().unwrap()).abs() < 1e-5);
        }
    }
}
