//! Caputo fractional-order three-species food chain: model, fractional ODE
//! solver, equilibria, stability tests and attractor scans.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod equilibria;
pub mod error;
pub mod fode;
pub mod model;
pub mod plot;
pub mod poly;
pub mod scan;
pub mod specfun;
pub mod stability;

pub use equilibria::{find_equilibria, interior_equilibrium, Equilibrium, EquilibriumKind};
pub use error::{Error, Result};
pub use fode::{integrate_pece, FodeProblem, MemoryPolicy, Trajectory};
pub use model::{nondimensionalize, DimParams, NondimParams, State};
pub use stability::{CoefficientCase, StabilityReport, Verdict};
