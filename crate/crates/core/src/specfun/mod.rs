//! Special functions: complex log-Gamma and polygamma, Binet's kernel, the
//! Poisson rate function and an Abel–Plana summation engine.

pub mod abel_plana;
pub mod entropy;
pub mod gamma;

pub use abel_plana::{abel_plana_sum, AbelPlana, FnSummand, HolomorphicSummand};
pub use entropy::{
    poisson_rate, poisson_rate_complex, poisson_rate_primitive, poisson_rate_primitive_complex,
};
pub use gamma::{binet_kernel, digamma, ln_gamma, log_gamma, polygamma};
