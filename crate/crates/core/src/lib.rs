//! Exact computations on corank-1 polynomial multigerms.

pub mod atlas;
pub mod dsl;
pub mod error;
pub mod gates;
pub mod germ;
pub mod ops;
pub mod ring;
pub mod scalar;
pub mod tangent;

pub use dsl::{format_multigerm, parse_multigerm, parse_multigerm_with, parse_poly, ParseOptions};
pub use error::{Error, Result};
pub use germ::{stratum_dim, AType, Branch, MultiGerm};
pub use ops::Unfolding;
pub use ring::{Monomial, Poly, StabilizationPolicy};
pub use scalar::{Field, Fp, Scalar};

/// Exact rational scalar used throughout the public API.
pub type Q = num_rational::BigRational;
/// Polynomial with exact rational coefficients.
pub type QPoly = Poly<Q>;
/// Multigerm with exact rational coefficients.
pub type QMultiGerm = MultiGerm<Q>;
