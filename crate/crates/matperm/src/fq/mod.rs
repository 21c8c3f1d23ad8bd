//! Finite-field scalars, polynomials over F_q, matrices, and the closed-form
//! polynomial counts used throughout the crate.

mod counts;
mod field;
mod matrix;
mod poly;

pub use counts::{
    enumerate_irreducibles, gl_order, irreducible_count, reiner_count, squarefree_count,
    squarefree_nonzero_constant_count, IRRED_ENUM_CAP,
};
pub use field::{FieldSpec, FieldSpecRepr, FqElem};
pub use matrix::MatrixFq;
pub use poly::{FactorProfile, MonicPoly};
