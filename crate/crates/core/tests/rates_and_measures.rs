use cjlab::equilibrium::{circle_log_moments, energy_rate, mu_a_measure, RadonMeasure1D};
use cjlab::export::{write_density_csv, write_rate_csv, RATE_HEADER};
use cjlab::ldp::{
    legendre_numeric, marginal_rate_h, optimal_trajectory, path_functional_xy, rate_ha, Branch, RatePoint,
};
use num_complex::Complex64;

#[test]
fn legendre_reproduces_rate_on_admissible_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..=12 {
        let eta = -1.2 + 0.2 * i as f64;
        let top = (2.0 * eta.cos() - 0.05).ln();
        for k in 0..=10 {
            let xi = -3.0 + (top + 3.0) * k as f64 / 10.0;
            let got = legendre_numeric(xi, eta).unwrap().value.finite().unwrap();
            worst = worst.max((got - rate_ha(xi, eta).finite().unwrap()).abs());
        }
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn interior_rate_equals_action_of_optimal_path() {
    // h_0 = γξ + ρη - 𝓛_0 and the same value as the action of the optimal path
    let p = RatePoint::new(0.6, -0.1, 0.2, Complex64::new(0.0, 0.0)).unwrap();
    let r = marginal_rate_h(p).unwrap();
    assert_eq!(r.branch, Branch::Interior);
    let (g, rho) = r.multipliers.unwrap();
    let tr = optimal_trajectory(p.horizon, g, rho).unwrap();
    let (xi, eta) = tr.endpoints().unwrap();
    assert!((xi - p.xi).abs() < 1e-8 && (eta - p.eta).abs() < 1e-8);
    let action = cjlab::ldp::path_action_h0(p.horizon, |t| tr.phi_dot(t), |t| tr.psi_dot(t), &[]).unwrap();
    assert!((action.finite().unwrap() - r.value.finite().unwrap()).abs() < 1e-8);
    let lambda = path_functional_xy(p.horizon, |_| g, |_| rho).unwrap();
    assert!((g * p.xi + rho * p.eta - lambda - r.value.finite().unwrap()).abs() < 1e-9);
}

#[test]
fn rate_surface_csv() {
    let mut rows = Vec::new();
    for xi in [-1.0, 0.0, 0.3, 0.4] {
        let p = RatePoint::new(0.5, xi, 0.0, Complex64::new(0.5, 0.0)).unwrap();
        rows.push((p, marginal_rate_h(p).unwrap()));
    }
    let mut buf = Vec::new();
    write_rate_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], RATE_HEADER);
    assert!(lines[1].contains(",linear,"));
    assert!(lines[2].contains(",interior,"));
    assert!(lines[4].contains(",inf,infinite,"));
}

#[test]
fn mu_a_is_a_zero_of_its_rate() {
    for a in [0.5, 1.0] {
        let r = energy_rate(&mu_a_measure(a).unwrap(), Complex64::new(a, 0.0)).unwrap();
        assert!(r.rate.abs() < 1e-4);
        assert!(circle_log_moments(a).unwrap().argmom.abs() < 1e-10);
    }
    let u = energy_rate(&RadonMeasure1D::uniform_circle(), Complex64::new(0.0, 0.0)).unwrap();
    assert!(u.sigma.abs() < 1e-8 && u.rate.abs() < 1e-8);
}

#[test]
fn density_table_csv() {
    let mu = mu_a_measure(1.0).unwrap();
    let mut buf = Vec::new();
    write_density_csv(&mut buf, "theta", &mu.density_table(5)).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,density"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn rate_surface_is_nonnegative_and_convex() {
    let d = Complex64::new(0.0, 0.0);
    for horizon in [0.2, 0.6, 0.95] {
        for k in 0..=30 {
            let eta = -1.5 * horizon + 0.1 * horizon * k as f64;
            let h = |xi: f64| marginal_rate_h(RatePoint::new(horizon, xi, eta, d).unwrap()).unwrap().value;
            for i in 0..40 {
                let xi = -2.0 + 0.06 * i as f64;
                let (a, m, b) = (h(xi - 0.03), h(xi), h(xi + 0.03));
                if let Some(mv) = m.finite() {
                    assert!(mv >= -1e-12, "T={horizon} ξ={xi} η={eta}: {mv}");
                    if let (Some(av), Some(bv)) = (a.finite(), b.finite()) {
                        assert!(av + bv - 2.0 * mv >= -1e-8, "T={horizon} ξ={xi} η={eta}");
                    }
                }
            }
        }
    }
}
