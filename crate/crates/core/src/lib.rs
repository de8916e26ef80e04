//! Exact combinatorics behind the character theory of reductive groups in
//! positive characteristic: affine Weyl groups and alcoves, Kazhdan-Lusztig
//! polynomials, generic and periodic polynomials, Weyl/Kostant character
//! formulas, and Braden-MacPherson intersection sheaves on affine moment
//! graphs over the rationals and prime fields.
//!
//! All arithmetic is exact; no floating point appears anywhere.

pub mod bmsheaf;
pub mod cache;
pub mod chars;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod momentgraph;
pub mod mpoly;
pub mod periodic;
pub mod rootdata;
pub mod scalar;
pub mod weyl;

pub use error::Error;

/// Bumped whenever a serialization or normalization convention changes;
/// cached tables from other versions are recomputed, never reused.
pub const NORMALIZATION_VERSION: u32 = 1;

pub type Result<T> = std::result::Result<T, Error>;
