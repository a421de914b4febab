//! Exact polynomial arithmetic and local algebra dimensions.

pub mod linalg;
pub mod local;
pub mod monomial;
pub mod poly;

pub use linalg::{Echelon, SparseRow};
pub use local::{
    is_quasi_homogeneous, milnor, quasi_homogeneous_weights, quotient_basis, quotient_dim,
    stabilize, tjurina, MonomialTable, StabilizationPolicy, Stabilized,
};
pub use monomial::Monomial;
pub use poly::{default_var_names, Poly};
