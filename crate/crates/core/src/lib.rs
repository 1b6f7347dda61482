//! Numerical laboratory for circular Jacobi β-ensembles.

pub mod equilibrium;
pub mod error;
pub mod export;
pub mod extended;
pub mod asymptotics;
pub mod gamma_law;
pub mod harness;
pub mod ldp;
pub mod params;
pub mod process;
pub mod quad;
pub mod sampler;
pub mod specfun;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use params::{EnsembleParams, Regime};
