//! Exact transition kernels and stationary laws for the argmin chain of
//! random walks and the argmin process of stable Lévy processes, together
//! with independent checks of those laws.

// `!(a > b)` is used on purpose: it also rejects NaN. Index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod chain;
pub mod error;
pub mod io;
pub mod ladder;
pub mod levy_sim;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod stable;
pub mod walk_sim;
pub mod window;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type Kernel = chain::ArgminChainKernel<f64>;
pub type ExactKernel = chain::ArgminChainKernel<Rational>;
pub type Ladder = ladder::LadderSequences<f64>;
pub type ExactLadder = ladder::LadderSequences<Rational>;
pub type Signs = ladder::SignProbabilities<f64>;
