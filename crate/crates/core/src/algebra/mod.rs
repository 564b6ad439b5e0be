//! Exact sparse bivariate Laurent-polynomial and rational-function arithmetic
//! over arbitrary-precision integers.
//!
//! The two formal variables are always `L` and `M`. Every value is exact: the
//! coefficients are [`num_bigint::BigInt`], the exponents are checked `i64`
//! pairs, and every operation is a pure function on immutable values. The
//! half-integer "ℓ, m" shapes seen in hyperbolic-geometry output are a
//! *rendering* of the same data (ℓ = L², m = M²), not a separate
//! representation; see [`render`].

mod gcd;
mod modgcd;
mod poly;
mod ratfun;
mod render;

pub use gcd::{content, exact_div, poly_gcd};
pub use poly::{BasisChange, LaurentPoly};
pub use ratfun::{CombineOp, RatFun};
pub use render::{render, RenderStyle};

pub(crate) use render::monomial_prefix;

use thiserror::Error;

/// Errors surfaced by the algebra layer.
///
/// Everything here is a caller-facing condition (bad input, a division that
/// does not exist, an evaluation at a pole); internal invariant violations
/// panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// A denominator or divisor was the zero polynomial.
    #[error("division by the zero polynomial")]
    DivisionByZero,

    /// `exact_div` was asked for a quotient that does not exist in
    /// `Z[L^{\u{00b1}1}, M^{\u{00b1}1}]`.
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,

    /// An operation that needs a nonzero polynomial (e.g. monomial clearing)
    /// received the zero polynomial.
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    /// Numeric evaluation hit a negative exponent at a zero coordinate.
    #[error("evaluation at {var} = 0 with a negative {var}-exponent present")]
    PoleAtZero {
        /// Which variable (`'L'` or `'M'`) was zero.
        var: char,
    },

    /// A basis change matrix did not have determinant ±1.
    #[error("basis change ({a}, {b}, {c}, {d}) is not unimodular")]
    NotUnimodular {
        /// Matrix entries as supplied.
        a: i64,
        /// Matrix entries as supplied.
        b: i64,
        /// Matrix entries as supplied.
        c: i64,
        /// Matrix entries as supplied.
        d: i64,
    },

    /// A serialized polynomial violated the interchange schema.
    #[error("invalid polynomial JSON: {0}")]
    BadPolynomialJson(String),
}
