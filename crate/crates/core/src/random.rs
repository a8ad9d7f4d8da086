//! Seeded samplers for the randomized property suites.
//!
//! Every sampler takes the generator explicitly; the suites derive one
//! ChaCha8 stream per suite from a single seed so that runs are reproducible.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cantor::{ClopenSet, OrderedPartition, Permutation, PrefixCode, PrefixMap, Word};
use crate::chains::ChainApprox;
use crate::symbolic::{Sign, Table};

pub type SuiteRng = ChaCha8Rng;

/// Independent stream number `stream` of the generator for `seed`.
pub fn rng(seed: u64, stream: u64) -> SuiteRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A complete prefix code with exactly `n ≥ 1` leaves, grown by splitting a
/// uniformly chosen leaf.
pub fn code_with(rng: &mut impl Rng, n: usize) -> PrefixCode {
    assert!(n >= 1, "a code has at least one leaf");
    let mut leaves = vec![Word::EMPTY];
    while leaves.len() < n {
        let i = rng.gen_range(0..leaves.len());
        let w = leaves.swap_remove(i);
        leaves.extend(w.children());
    }
    PrefixCode::new(leaves).expect("splitting keeps the code complete")
}

/// A code with between 1 and `max_leaves` leaves.
pub fn code(rng: &mut impl Rng, max_leaves: usize) -> PrefixCode {
    let n = rng.gen_range(1..=max_leaves);
    code_with(rng, n)
}

pub fn chain_on(rng: &mut impl Rng, code: &PrefixCode) -> ChainApprox {
    let mut order = code.leaves().to_vec();
    order.shuffle(rng);
    ChainApprox::new(order).expect("a reordered code")
}

pub fn chain(rng: &mut impl Rng, max_leaves: usize) -> ChainApprox {
    let c = code(rng, max_leaves);
    chain_on(rng, &c)
}

/// A prefix map between two random codes of the same size (at most
/// `max_leaves`), with a random bijection between their leaves.
pub fn map(rng: &mut impl Rng, max_leaves: usize) -> PrefixMap {
    let n = rng.gen_range(1..=max_leaves);
    let domain = code_with(rng, n);
    let mut range = code_with(rng, n).leaves().to_vec();
    range.shuffle(rng);
    PrefixMap::from_pairs(domain.leaves().iter().copied().zip(range)).expect("two complete codes")
}

/// An ordered partition into exactly `k` parts whose parts are unions of
/// leaves of `code`. Requires `k ≤ |code|`.
pub fn partition_on(rng: &mut impl Rng, code: &PrefixCode, k: usize) -> OrderedPartition {
    assert!(k >= 1 && k <= code.len(), "cannot split {} leaves into {k} parts", code.len());
    let mut leaves = code.leaves().to_vec();
    leaves.shuffle(rng);
    let mut parts: Vec<Vec<Word>> = vec![Vec::new(); k];
    for (i, w) in leaves.into_iter().enumerate() {
        let p = if i < k { i } else { rng.gen_range(0..k) };
        parts[p].push(w);
    }
    OrderedPartition::new(parts.into_iter().map(ClopenSet::from).collect()).expect("leaves of a code")
}

/// A `k`-part partition measurable with respect to a random code with at
/// least `k` and at most `max_leaves.max(k)` leaves.
pub fn partition(rng: &mut impl Rng, k: usize, max_leaves: usize) -> OrderedPartition {
    let n = rng.gen_range(k..=max_leaves.max(k));
    let c = code_with(rng, n);
    partition_on(rng, &c, k)
}

pub fn permutation(rng: &mut impl Rng, k: usize) -> Permutation {
    let mut images: Vec<usize> = (0..k).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("a shuffled identity")
}

pub fn table(rng: &mut impl Rng, k: usize) -> Table {
    Table::from_fn(k, |_| if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_respect_sizes() {
        let mut r = rng(7, 0);
        for _ in 0..200 {
            let c = code(&mut r, 8);
            assert!((1..=8).contains(&c.len()));
            let ch = chain_on(&mut r, &c);
            assert_eq!(ch.len(), c.len());
            let g = map(&mut r, 8);
            assert!(g.pairs().len() <= 8);
            let k = r.gen_range(1..=c.len());
            let p = partition_on(&mut r, &c, k);
            assert_eq!(p.len(), k);
            assert!(p.is_measurable(c.leaves()));
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u32> = (0..5).map(|_| rng(3, 1).gen()).collect();
        let b: Vec<u32> = (0..5).map(|_| rng(3, 1).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(rng(3, 1).gen::<u64>(), rng(3, 2).gen::<u64>());
    }
}
