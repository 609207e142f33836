//! Constructions and exact verifiers for popular-difference problems.
//!
//! The crate is organised around the objects that appear in the study of
//! popular differences for corners and other point patterns:
//!
//! * [`patterns`]: pattern counting over grids and finite groups, and the
//!   popular-difference spectrum `d -> count`.
//! * [`hypergraph`]: hypergraph densities, homomorphism counts, triforce and
//!   k-force densities, weighted triforce densities of step kernels and the
//!   sparse-pair pruning procedure.
//! * [`behrend`]: sphere-type constructions free of 3-APs, of nontrivial
//!   solutions to `x + y + z = 3w`, and of quadratic configurations.
//! * [`diamond`]: diamond-free tripartite graphs built from AP-free sets.
//! * [`contfrac`]: exact continued fractions and the construction of
//!   irrationals whose approximant denominators avoid small primes.
//! * [`avoiders`]: sets of `[N]^3` and `[N]` without popular corners or
//!   popular five-point patterns, and lifts to general patterns.
//! * [`mandache`]: random sets sampled from a step kernel.
//!
//! All verification paths are exact: big integers and rationals throughout,
//! never floats, except for summary statistics in reports.

pub mod avoiders;
pub mod behrend;
pub mod bits;
pub mod contfrac;
pub mod diamond;
mod error;
pub mod hypergraph;
pub mod mandache;
pub mod patterns;
pub mod text;

pub use error::{Error, Result};

/// Exact rational type used for densities and kernel values.
pub type Rational = num_rational::BigRational;
