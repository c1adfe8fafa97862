//! Exact arithmetic kernels.

mod combinatorics;
mod cyclotomic;
mod field;
mod matrix;
mod poly;
mod rational;
mod series;
mod snf;

pub use combinatorics::{monomials, subsets};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use field::Field;
pub use matrix::{eigenspace, Matrix};
pub use poly::UniPoly;
pub use rational::{format_rational, parse_rational, Rational};
pub use series::{det_series_factor, BiSeries, FactorKind, Marker, Sign};
pub use snf::{smith_normal_form, IntMatrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("conductor {from} does not divide {to}")]
    BadEmbedding { from: u64, to: u64 },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
