//! Rectangle crossing probabilities for critical percolation and SLE,
//! computed three independent ways (hypergeometric series, singular
//! integrals over the cross-ratio, eta-quotient tail integrals), together
//! with an exact q-expansion engine for the underlying modular objects and
//! a deterministic Monte Carlo sampler for finite-lattice confirmation.

pub mod error;
pub mod rational;

pub mod forms;
pub mod qseries;

pub mod gamma;
pub mod hyp;
pub mod modeval;
pub mod percolation;
pub mod crossing;
pub mod quad;

pub use error::{CrossingError, EvalError, QSeriesError};
pub use num_complex::Complex64;
pub use qseries::QExpansion;
pub use rational::Rat;
