//! Exact finitary toolkit for the homeomorphism group of the Cantor set acting
//! on its space of maximal chains.
//!
//! The crate models the Cantor set `{0,1}^ℕ` through its Boolean algebra of
//! clopen sets: clopens are canonical antichains of binary words, and
//! homeomorphisms are prefix-replacement bijections between complete prefix
//! codes. On top of that it provides
//!
//! * [`partitions`]: ordered/unordered set partitions of `{1,…,n}` with
//!   amalgamation and coarsening,
//! * [`cantor`]: clopen sets, clopen partitions, prefix maps and the
//!   partition-homogeneity witness,
//! * [`chains`]: finite traces of maximal chains, induced orders and the
//!   permutation ratio `θ`,
//! * [`symbolic`]: `±1`-configurations on ordered partitions, their
//!   table-valued conjugates and the permutation cocycle,
//! * [`dynamics`]: constructive, independently checkable witnesses for
//!   minimality and proximality statements,
//! * [`dual_ramsey`]: a certificate-producing dual Ramsey search engine and
//!   the table-extraction pipeline built on it,
//! * [`suites`]: the property suites behind `umflow verify-suite`.

pub mod cantor;
pub mod chains;
pub mod dual_ramsey;
pub mod dynamics;
mod error;
pub mod partitions;
pub mod random;
pub mod suites;
pub mod symbolic;

pub use error::{Error, Rejection, Result};
