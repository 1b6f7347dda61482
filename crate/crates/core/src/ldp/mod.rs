//! Large-deviation rate functions for the log-characteristic-polynomial process.

pub mod cgf;
pub mod marginal;
pub mod rate;

pub use cgf::{
    cgf_l0, cgf_l0_gradient, cgf_l0_hessian, cgf_ld, chernov_bound, constant_c, hkoc_forms, hkoc_imag, hkoc_real,
    path_action_h0, path_functional_lambda0, path_functional_xy, HkocForm, SingularAtom,
};
pub use marginal::{
    implicit_map, marginal_rate_h, optimal_trajectory, solve_implicit_gamma, xi_boundary, xi_upper, Branch,
    MarginalRateResult, RatePoint, Trajectory,
};
pub use rate::{
    lagrangian, lagrangian_gradient, lagrangian_hessian, legendre_argmax, legendre_numeric, rate_ha, recession,
    LegendreResult,
};
