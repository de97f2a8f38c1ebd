//! Exact-arithmetic toolkit for panel complexes over finite posets.
//!
//! The crate builds standard complexes and Bestvina complexes for a finite
//! poset, develops panel complexes along a simple complex of finite groups,
//! and evaluates the cohomological dimension formulas that the two
//! constructions must agree on. All arithmetic is exact: arbitrary-precision
//! integers, rationals, or prime fields.

pub mod bestvina;
pub mod breddim;
pub mod corpus;
pub mod cw;
pub mod develop;
pub mod error;
pub mod homology;
pub mod io;
pub mod matrix;
pub mod panel;
pub mod perm;
pub mod poset;
pub mod ring;
pub mod scog;
pub mod snf;
pub mod word;

pub use error::Error;
pub use ring::Ring;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
