//! The Cantor set through its Boolean algebra of clopen sets.
//!
//! Points are never materialized: a point is approximated by a finite prefix
//! and every question (membership, images, equality of images) is decided on
//! cylinders. Homeomorphisms are [`PrefixMap`]s, the finite-support elements
//! of `Homeo(X)` that prefix replacement can express; they already act
//! transitively on ordered clopen partitions of equal length, which is what
//! every construction here needs.

mod clopen;
mod code;
mod map;
mod partition;
mod permutation;
mod word;

pub use clopen::{canonicalize, ClopenSet};
pub use code::PrefixCode;
pub use map::{compose, invert, PrefixMap};
pub use partition::{
    apply_partition, homogeneity_witness, join, stabilizes, OrderedPartition, UnorderedPartition,
};
pub use permutation::{factorial, Permutation};
pub use word::{Word, MAX_WORD_LEN};

pub(crate) use code::{extensions, prefix_index};
pub(crate) use partition::labelled_cylinders;

/// Image of a clopen set under `g`.
pub fn apply_clopen(g: &PrefixMap, c: &ClopenSet) -> ClopenSet {
    g.apply_clopen(c)
}
