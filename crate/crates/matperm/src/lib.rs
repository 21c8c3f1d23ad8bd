//! Exact statistics of characteristic polynomials of random matrices over
//! finite fields, their permutation-cycle analogues, and p-adic cokernel
//! experiments.
//!
//! Everything probabilistic in this crate is computed with exact big-rational
//! arithmetic; floating point appears only in reporting layers and in the
//! large-n cycle-count asymptotics of [`oracle`].

pub mod cycleindex;
pub mod error;
pub mod fq;
pub mod oracle;
pub mod padic;
pub mod partitions;
pub mod series;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
