//! Exact-arithmetic g-circulant matrices over generalized k-Horadam number
//! sequences.
//!
//! The crate constructs circulant and g-circulant matrices whose entries come
//! from a second-order linear recurrence, evaluates closed-form expressions
//! for their spectral norm, determinant and inverse, and cross-checks every
//! closed form against an independent brute-force oracle (fraction-free
//! elimination, exact Gauss-Jordan, power iteration).

pub mod closed_form;
pub mod numeric;
pub mod sequence;
pub mod structmat;
pub mod verify;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or inconsistent arguments.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A closed-form formula's stated precondition does not hold.
    #[error("formula inapplicable: {0}")]
    FormulaInapplicable(String),
    /// A matrix required to be invertible is singular.
    #[error("singular matrix: {0}")]
    Singular(String),
    /// A floating-point procedure failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use numeric::Rational;
pub use sequence::{HoradamParams, Preset};
pub use structmat::{GCircSpec, Matrix};
