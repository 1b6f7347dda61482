use cjlab::asymptotics::limit_covariance;
use cjlab::gamma_law::{cgf_lambda, cumulants, mellin_fourier, CoefficientLaw};
use cjlab::ldp::{cgf_l0_hessian, lagrangian_hessian, rate_ha};
use cjlab::process::{alpha_to_gamma, gamma_to_alpha, log_path_values, szego_eval};
use cjlab::specfun::{digamma, ln_gamma, log_gamma, polygamma};
use num_complex::Complex64;
use proptest::prelude::*;

fn psd(m: [[f64; 2]; 2], tol: f64) -> bool {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    m[0][0] >= -tol && m[1][1] >= -tol && det >= -tol * (m[0][0].abs() + m[1][1].abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn digamma_recurrence(re in 0.05f64..40.0, im in -30.0f64..30.0) {
        let z = Complex64::new(re, im);
        let lhs = digamma(z + 1.0).unwrap() - digamma(z).unwrap();
        prop_assert!((lhs - 1.0 / z).norm() < 1e-11 * (1.0 + (1.0 / z).norm()));
    }

    #[test]
    fn log_gamma_recurrence(re in 0.05f64..60.0, im in -40.0f64..40.0) {
        let z = Complex64::new(re, im);
        let lhs = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap();
        let rhs = z.ln();
        // equal modulo 2πi
        let d = lhs - rhs;
        let k = (d.im / std::f64::consts::TAU).round();
        prop_assert!((d - Complex64::new(0.0, k * std::f64::consts::TAU)).norm() < 1e-10 * (1.0 + lhs.norm()));
        prop_assert!((ln_gamma(re).unwrap() - log_gamma(Complex64::new(re, 0.0)).unwrap().re).abs() < 1e-12 * (1.0 + ln_gamma(re).unwrap().abs()));
    }

    #[test]
    fn trigamma_is_conjugation_symmetric(re in 0.1f64..20.0, im in -10.0f64..10.0) {
        let z = Complex64::new(re, im);
        let a = polygamma(1, z).unwrap();
        let b = polygamma(1, z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn coefficient_covariance_is_psd(r in 0.0f64..20.0, dre in -0.45f64..3.0, dim in -3.0f64..3.0) {
        let law = CoefficientLaw::new(r, Complex64::new(dre, dim)).unwrap();
        let c = cumulants(&law).unwrap();
        prop_assert!(psd(c.covariance, 1e-12));
        prop_assert!(c.fourth_bound >= 0.0);
    }

    #[test]
    fn conjugate_delta_conjugates_mean(r in 0.0f64..10.0, dre in -0.4f64..2.0, dim in -2.0f64..2.0) {
        let a = cumulants(&CoefficientLaw::new(r, Complex64::new(dre, dim)).unwrap()).unwrap();
        let b = cumulants(&CoefficientLaw::new(r, Complex64::new(dre, -dim)).unwrap()).unwrap();
        prop_assert!((a.mean - b.mean.conj()).norm() < 1e-12 * (1.0 + a.mean.norm()));
        prop_assert!((a.covariance[0][1] + b.covariance[0][1]).abs() < 1e-12);
    }

    #[test]
    fn cgf_matches_transform(r in 0.0f64..8.0, dre in 0.0f64..2.0, dim in -1.0f64..1.0, s in -0.2f64..2.0, t in -2.0f64..2.0) {
        let law = CoefficientLaw::new(r, Complex64::new(dre, dim)).unwrap();
        let cgf = cgf_lambda(&law, s, t).unwrap();
        let mf = mellin_fourier(&law, Complex64::new(s, -t), Complex64::new(s, t)).unwrap();
        prop_assert!((cgf.exp() - mf.re).abs() < 1e-11 * mf.re.abs());
    }

    #[test]
    fn limit_covariance_density_is_psd(beta in 0.5f64..8.0, dre in 0.0f64..3.0, dim in -3.0f64..3.0, t in 0.01f64..0.99) {
        let (z, integral) = limit_covariance(beta, Complex64::new(dre, dim), t).unwrap();
        prop_assert!(psd(z, 1e-12));
        prop_assert!(psd(integral, 1e-12));
    }

    #[test]
    fn lagrangian_and_cgf_are_convex(x in -0.99f64..20.0, y in -20.0f64..20.0, horizon in 0.05f64..1.0, s in 0.0f64..5.0, t in -5.0f64..5.0) {
        prop_assert!(psd(lagrangian_hessian(x, y).unwrap(), 1e-12));
        let s = s - 0.99 * (1.0 - horizon);
        prop_assert!(psd(cgf_l0_hessian(horizon, s, t).unwrap(), 1e-12));
    }

    #[test]
    fn rate_is_nonnegative(xi in -10.0f64..1.0, eta in -2.0f64..2.0) {
        if let Some(v) = rate_ha(xi, eta).finite() {
            prop_assert!(v >= -1e-15);
        }
    }

    #[test]
    fn verblunsky_round_trip(seed in any::<u64>(), n in 1usize..20) {
        let mut s = cjlab::sampler::RandomStream::new(seed, 0);
        let gamma: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(0.9 * s.uniform().sqrt(), std::f64::consts::TAU * s.uniform()))
            .collect();
        let alpha = gamma_to_alpha(&gamma).unwrap();
        prop_assert!(alpha.alpha.iter().zip(&gamma).all(|(a, g)| (a.norm() - g.norm()).abs() < 1e-14));
        let back = alpha_to_gamma(&alpha).unwrap();
        for (a, b) in back.iter().zip(&gamma) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        let phi = szego_eval(&alpha, Complex64::new(1.0, 0.0));
        let logs = log_path_values(&gamma).unwrap();
        prop_assert!((phi[n] - logs[n].exp()).norm() < 1e-12 * phi[n].norm().max(1.0));
    }
}
