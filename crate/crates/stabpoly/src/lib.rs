//! Library for constructing, testing, and transforming multivariate
//! upper-half-plane (stable) polynomials.
//!
//! A polynomial is *stable* when it has no zeros with every variable in
//! the open upper half plane. The crate provides:
//!
//! - exact sparse complex polynomial arithmetic and the structural
//!   transforms under which stability is closed ([`poly`]),
//! - univariate root analysis and the classical root-location
//!   predicates ([`uni`]),
//! - sampled multivariate stability and interlacing tests with hard
//!   witnesses on failure ([`stability`]),
//! - certified-stable constructions: determinantal pencils, mixed
//!   determinant sums, orthogonal-style recurrences ([`constructions`]),
//! - stability-preserving linear operators and their polynomial
//!   symbols ([`operators`]),
//! - a golden test corpus ([`corpus`]).

pub mod constructions;
pub mod corpus;
pub mod error;
pub mod operators;
pub mod poly;
pub mod stability;
pub mod uni;

pub use error::{PolyError, StabError, UniError};
pub use poly::{AffineLine, ExpVec, MultiPoly};
pub use stability::{SampleConfig, Verdict, VerdictTag};
pub use uni::{RootReport, UniPoly};
