//! Exact arithmetic: rationals, one simple extension layer, sparse bivariate
//! and dense univariate polynomials, factorization, and the polynomial grammar.

mod bipoly;
pub(crate) mod factor;
mod field;
mod parse;
pub(crate) mod qpoly;
mod unipoly;

pub use bipoly::{BiPoly, Direction};
pub use factor::{univariate_factor, univariate_factor_in};
pub use field::{AlgebraicNumber, ExtField, Scalar};
pub use parse::{parse_poly, MAX_TOTAL_DEGREE};
pub use unipoly::UniPoly;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("scalars live over incompatible extension fields")]
    FieldMismatch,
    #[error("the {m}-th power of the exceptional coordinate does not divide the substituted polynomial")]
    NotDivisible { m: u32 },
    #[error("factorization would need a second extension layer")]
    ExtensionTowerUnsupported,
    #[error("invalid defining polynomial: {0}")]
    InvalidModulus(String),
    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("total degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: u32, cap: u32 },
}
