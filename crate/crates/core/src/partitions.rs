//! Ordered and unordered set partitions of `{1,…,n}`.
//!
//! A [`SetPartition`] stores, for every element, the index of its block. When
//! the blocks are listed in increasing order of their minima (the partition is
//! *naturally ordered*) the label sequence is a restricted-growth string, which
//! is the canonical encoding used for keys, serialization and enumeration
//! order. Unordered partitions are always handled through their naturally
//! ordered representative.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// A partition of `{1,…,n}` into `k` nonempty blocks, with an order on the
/// blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<usize>,
    k: usize,
}

impl SetPartition {
    /// Builds a partition from per-element block labels (`labels[e]` is the
    /// block of element `e + 1`). Labels must cover `0..k` for some `k`.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut seen = vec![false; k];
        for &l in &labels {
            seen[l] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid(format!(
                "labels {labels:?} leave a block empty"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Builds a partition from 1-based blocks over `{1,…,n}`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invalid(format!("block {} is empty", b + 1)));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::Invalid(format!("element {e} outside 1..={n}")));
                }
                if labels[e - 1] != usize::MAX {
                    return Err(Error::Invalid(format!("element {e} appears twice")));
                }
                labels[e - 1] = b;
            }
        }
        if let Some(e) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Invalid(format!("element {} is not covered", e + 1)));
        }
        Ok(Self {
            labels,
            k: blocks.len(),
        })
    }

    /// Parses a restricted-growth string such as `"0010"`.
    pub fn from_rgs(s: &str) -> Result<Self> {
        let labels = s
            .bytes()
            .map(|b| {
                DIGITS
                    .iter()
                    .position(|&d| d == b)
                    .ok_or_else(|| Error::Parse(format!("bad label character {:?} in {s:?}", b as char)))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Self::from_labels(labels)?;
        if !p.is_naturally_ordered() {
            return Err(Error::Parse(format!("{s:?} is not a restricted-growth string")));
        }
        Ok(p)
    }

    /// Restricted-growth encoding of the naturally ordered representative.
    pub fn to_rgs(&self) -> String {
        let natural = self.naturally_ordered();
        natural.labels.iter().map(|&l| DIGITS[l] as char).collect()
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Block index (0-based) of the 1-based element `e`.
    pub fn block_of(&self, e: usize) -> usize {
        self.labels[e - 1]
    }

    /// The blocks as sorted lists of 1-based elements, in block order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (e, &l) in self.labels.iter().enumerate() {
            blocks[l].push(e + 1);
        }
        blocks
    }

    /// `min(C_i) < min(C_j)` for all `i < j`.
    pub fn is_naturally_ordered(&self) -> bool {
        let mut next = 0;
        for &l in &self.labels {
            if l > next {
                return false;
            }
            if l == next {
                next += 1;
            }
        }
        true
    }

    /// Same blocks, reordered by increasing minimum.
    pub fn naturally_ordered(&self) -> SetPartition {
        let mut relabel = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if relabel[l] == usize::MAX {
                    relabel[l] = next;
                    next += 1;
                }
                relabel[l]
            })
            .collect();
        SetPartition { labels, k: self.k }
    }

    /// `true` iff every block of `coarse` is a union of blocks of `self`.
    pub fn is_refinement_of(&self, coarse: &SetPartition) -> Result<bool> {
        if self.n() != coarse.n() {
            return Err(Error::Contract(format!(
                "ground sets differ: {} vs {}",
                self.n(),
                coarse.n()
            )));
        }
        let mut image = vec![usize::MAX; self.k];
        for (&f, &c) in self.labels.iter().zip(&coarse.labels) {
            if image[f] == usize::MAX {
                image[f] = c;
            } else if image[f] != c {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, e) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_rgs())
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SetPartition::from_rgs(&s).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`SetPartition::naturally_ordered`].
pub fn naturally_order(p: &SetPartition) -> SetPartition {
    p.naturally_ordered()
}

/// Free-function form of [`SetPartition::is_refinement_of`].
pub fn is_refinement(fine: &SetPartition, coarse: &SetPartition) -> Result<bool> {
    fine.is_refinement_of(coarse)
}

/// Amalgamation `γ_β`: block `j` of the result is the union of the blocks of
/// `gamma` indexed by block `j` of `beta`.
pub fn amalgamate(gamma: &SetPartition, beta: &SetPartition) -> Result<SetPartition> {
    if !gamma.is_naturally_ordered() || !beta.is_naturally_ordered() {
        return Err(Error::Contract(
            "amalgamation needs naturally ordered operands".into(),
        ));
    }
    if beta.n() != gamma.k() {
        return Err(Error::Contract(format!(
            "index partition is over {} elements but the partition has {} blocks",
            beta.n(),
            gamma.k()
        )));
    }
    let labels = gamma.labels.iter().map(|&c| beta.labels[c]).collect();
    Ok(SetPartition { labels, k: beta.k() }.naturally_ordered())
}

/// All naturally ordered `k`-block coarsenings `η_τ`, `τ ∈ Π(m,k)`, of a
/// naturally ordered `eta` with `m` blocks, sorted by encoding.
pub fn coarsenings(eta: &SetPartition, k: usize) -> Result<Vec<SetPartition>> {
    let mut out = enumerate_partitions(eta.k(), k, true)
        .map(|tau| amalgamate(eta, &tau))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Streams the partitions of `{1,…,n}` into `k` blocks in lexicographic order
/// of their label strings. With `naturally_ordered` only restricted-growth
/// strings are produced (one per unordered partition); otherwise every
/// ordering of the blocks appears. Out-of-range `k` yields an empty stream.
pub fn enumerate_partitions(n: usize, k: usize, naturally_ordered: bool) -> Partitions {
    let current = if k >= 1 && k <= n {
        let mut labels = vec![0; n];
        fill_min(&mut labels, 0, n, k, naturally_ordered);
        Some(labels)
    } else {
        None
    };
    Partitions {
        k,
        natural: naturally_ordered,
        current,
    }
}

/// Iterator returned by [`enumerate_partitions`].
#[derive(Debug, Clone)]
pub struct Partitions {
    k: usize,
    natural: bool,
    current: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        let labels = self.current.take()?;
        let item = SetPartition {
            labels: labels.clone(),
            k: self.k,
        };
        self.current = advance(labels, self.k, self.natural);
        Some(item)
    }
}

fn used_mask(prefix: &[usize], k: usize) -> Vec<bool> {
    let mut used = vec![false; k];
    for &l in prefix {
        used[l] = true;
    }
    used
}

// Lexicographically least completion of labels[from..] given labels[..from].
fn fill_min(labels: &mut [usize], from: usize, n: usize, k: usize, natural: bool) {
    let mut used = used_mask(&labels[..from], k);
    let mut used_count = used.iter().filter(|&&u| u).count();
    for (j, slot) in labels.iter_mut().enumerate().take(n).skip(from) {
        let remaining = n - j;
        let missing = k - used_count;
        let v = if natural {
            if used_count == 0 || missing == remaining {
                used_count
            } else {
                0
            }
        } else if missing == remaining {
            used.iter().position(|&u| !u).expect("a label is missing")
        } else {
            0
        };
        *slot = v;
        if !used[v] {
            used[v] = true;
            used_count += 1;
        }
    }
}

fn advance(mut labels: Vec<usize>, k: usize, natural: bool) -> Option<Vec<usize>> {
    let n = labels.len();
    for i in (0..n).rev() {
        let used = used_mask(&labels[..i], k);
        let used_count = used.iter().filter(|&&u| u).count();
        let ceiling = if natural { used_count.min(k - 1) } else { k - 1 };
        if natural && i == 0 {
            continue;
        }
        for (v, &taken) in used.iter().enumerate().take(ceiling + 1).skip(labels[i] + 1) {
            let after = used_count + usize::from(!taken);
            if k - after <= n - 1 - i {
                labels[i] = v;
                fill_min(&mut labels, i + 1, n, k, natural);
                return Some(labels);
            }
        }
    }
    None
}

/// Stirling number of the second kind `S(n,k)`.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Ranks naturally ordered `k`-block partitions of `{1,…,n}` by their
/// position in [`enumerate_partitions`] order.
#[derive(Debug, Clone)]
pub struct PartitionIndex {
    n: usize,
    k: usize,
    // completions[r][u]: ways to fill r more positions from u used labels to exactly k.
    completions: Vec<Vec<u128>>,
}

impl PartitionIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let mut completions = vec![vec![0u128; k + 2]; n + 1];
        completions[0][k] = 1;
        for r in 1..=n {
            for u in 0..=k {
                let stay = u as u128 * completions[r - 1][u];
                let grow = if u < k { completions[r - 1][u + 1] } else { 0 };
                completions[r][u] = stay + grow;
            }
        }
        Self { n, k, completions }
    }

    /// Number of partitions indexed, `S(n,k)`.
    pub fn len(&self) -> usize {
        if self.n == 0 {
            return usize::from(self.k == 0);
        }
        self.completions[self.n - 1][1] as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `p` (any block order) among the naturally ordered
    /// partitions, or `None` if it has the wrong shape.
    pub fn rank(&self, p: &SetPartition) -> Option<usize> {
        if p.n() != self.n || p.k() != self.k || self.n == 0 {
            return None;
        }
        let natural = p.naturally_ordered();
        let mut used = 1;
        let mut rank = 0u128;
        for (i, &l) in natural.labels.iter().enumerate().skip(1) {
            rank += l as u128 * self.completions[self.n - 1 - i][used];
            used = used.max(l + 1);
        }
        Some(rank as usize)
    }
}

/// A total colouring of the unordered partitions `Π̃(n,k)`, stored by
/// [`PartitionIndex`] rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    k: usize,
    colors: Vec<u32>,
}

impl Coloring {
    /// Colours listed in enumeration order of `Π(n,k)`.
    pub fn new(n: usize, k: usize, colors: Vec<u32>) -> Result<Self> {
        let expected = stirling2(n, k);
        if colors.len() as u128 != expected {
            return Err(Error::Contract(format!(
                "colouring of Π̃({n},{k}) needs {expected} colours, got {}",
                colors.len()
            )));
        }
        Ok(Self { n, k, colors })
    }

    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(&SetPartition) -> u32) -> Self {
        let colors = enumerate_partitions(n, k, true).map(|p| f(&p)).collect();
        Self { n, k, colors }
    }

    pub fn constant(n: usize, k: usize, color: u32) -> Self {
        Self::from_fn(n, k, |_| color)
    }

    /// Builds a colouring from encoded keys, rejecting partial maps.
    pub fn from_map(n: usize, k: usize, map: &BTreeMap<String, u32>) -> Result<Self> {
        let mut colors = Vec::new();
        for p in enumerate_partitions(n, k, true) {
            let key = p.to_rgs();
            let c = map
                .get(&key)
                .ok_or_else(|| Error::Contract(format!("colouring has no colour for {key}")))?;
            colors.push(*c);
        }
        if map.len() != colors.len() {
            return Err(Error::Contract(format!(
                "colouring has {} entries, Π̃({n},{k}) has {}",
                map.len(),
                colors.len()
            )));
        }
        Ok(Self { n, k, colors })
    }

    pub fn to_map(&self) -> BTreeMap<String, u32> {
        enumerate_partitions(self.n, self.k, true)
            .zip(&self.colors)
            .map(|(p, &c)| (p.to_rgs(), c))
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Colours in enumeration order.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Number of distinct colours actually used.
    pub fn palette_size(&self) -> usize {
        let mut seen: Vec<u32> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn color_of(&self, p: &SetPartition) -> Result<u32> {
        PartitionIndex::new(self.n, self.k)
            .rank(p)
            .map(|r| self.colors[r])
            .ok_or_else(|| Error::Contract(format!("{p} is not in Π̃({},{})", self.n, self.k)))
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, u32>::deserialize(d)?;
        let first = map
            .keys()
            .next()
            .ok_or_else(|| serde::de::Error::custom("empty colouring has no ground set"))?;
        let p = SetPartition::from_rgs(first).map_err(serde::de::Error::custom)?;
        Coloring::from_map(p.n(), p.k(), &map).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> SetPartition {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        SetPartition::from_blocks(n, &blocks).unwrap()
    }

    #[test]
    fn three_into_two() {
        let got: Vec<_> = enumerate_partitions(3, 2, true).collect();
        assert_eq!(
            got,
            vec![p(3, &[&[1, 2], &[3]]), p(3, &[&[1, 3], &[2]]), p(3, &[&[1], &[2, 3]])]
        );
    }

    #[test]
    fn single_block_and_counts() {
        let one: Vec<_> = enumerate_partitions(5, 1, true).collect();
        assert_eq!(one, vec![p(5, &[&[1, 2, 3, 4, 5]])]);
        assert_eq!(enumerate_partitions(4, 2, true).count(), 7);
        assert_eq!(enumerate_partitions(4, 2, false).count(), 14);
        assert_eq!(enumerate_partitions(3, 0, true).count(), 0);
        assert_eq!(enumerate_partitions(3, 4, false).count(), 0);
    }

    #[test]
    fn ordered_stream_is_sorted_and_surjective() {
        let all: Vec<_> = enumerate_partitions(5, 3, false).collect();
        assert_eq!(all.len(), 150);
        assert!(all.windows(2).all(|w| w[0].labels < w[1].labels));
    }

    #[test]
    fn natural_order_examples() {
        assert_eq!(p(3, &[&[2], &[1, 3]]).naturally_ordered(), p(3, &[&[1, 3], &[2]]));
        let id = p(3, &[&[1], &[2], &[3]]);
        assert_eq!(id.naturally_ordered(), id);
        assert_eq!(
            p(5, &[&[3, 4], &[1], &[2, 5]]).naturally_ordered(),
            p(5, &[&[1], &[2, 5], &[3, 4]])
        );
    }

    #[test]
    fn amalgamation_examples() {
        let id3 = p(3, &[&[1], &[2], &[3]]);
        let b = p(3, &[&[1, 2], &[3]]);
        assert_eq!(amalgamate(&id3, &b).unwrap(), b);
        let g = p(4, &[&[1, 3], &[2, 4]]);
        assert_eq!(amalgamate(&g, &p(2, &[&[1, 2]])).unwrap(), p(4, &[&[1, 2, 3, 4]]));
        let g = p(4, &[&[1, 4], &[2], &[3]]);
        let b = p(3, &[&[1, 3], &[2]]);
        assert_eq!(amalgamate(&g, &b).unwrap(), p(4, &[&[1, 3, 4], &[2]]));
    }

    #[test]
    fn amalgamation_rejects_bad_operands() {
        let g = p(3, &[&[1], &[2], &[3]]);
        assert!(matches!(
            amalgamate(&g, &p(2, &[&[1], &[2]])),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            amalgamate(&p(2, &[&[2], &[1]]), &p(2, &[&[1, 2]])),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn coarsening_examples() {
        let id3 = p(3, &[&[1], &[2], &[3]]);
        let got = coarsenings(&id3, 2).unwrap();
        assert_eq!(
            got,
            vec![p(3, &[&[1, 2], &[3]]), p(3, &[&[1, 3], &[2]]), p(3, &[&[1], &[2, 3]])]
        );
        let eta = p(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(coarsenings(&eta, 2).unwrap(), vec![eta.clone()]);
        assert_eq!(coarsenings(&eta, 1).unwrap(), vec![p(4, &[&[1, 2, 3, 4]])]);
    }

    #[test]
    fn refinement_examples() {
        let id3 = p(3, &[&[1], &[2], &[3]]);
        let a = p(3, &[&[1, 3], &[2]]);
        let b = p(3, &[&[1, 2], &[3]]);
        assert!(is_refinement(&id3, &a).unwrap());
        assert!(!is_refinement(&b, &a).unwrap());
        assert!(is_refinement(&a, &a).unwrap());
        assert!(matches!(
            is_refinement(&a, &p(2, &[&[1, 2]])),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn rgs_round_trip_and_parse_errors() {
        let q = p(4, &[&[1, 2, 4], &[3]]);
        assert_eq!(q.to_rgs(), "0010");
        assert_eq!(SetPartition::from_rgs("0010").unwrap(), q);
        assert!(SetPartition::from_rgs("0200").is_err());
        assert!(SetPartition::from_rgs("01x").is_err());
        assert_eq!(q.to_string(), "({1,2,4},{3})");
    }

    #[test]
    fn index_matches_enumeration() {
        for n in 1..=7 {
            for k in 1..=n {
                let idx = PartitionIndex::new(n, k);
                let all: Vec<_> = enumerate_partitions(n, k, true).collect();
                assert_eq!(idx.len(), all.len());
                for (i, q) in all.iter().enumerate() {
                    assert_eq!(idx.rank(q), Some(i));
                }
            }
        }
    }

    #[test]
    fn coloring_json_is_a_key_map() {
        let c = Coloring::from_fn(3, 2, |q| if q.to_rgs() == "011" { 1 } else { 0 });
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"001":0,"010":0,"011":1}"#);
        let back: Coloring = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Coloring>(r#"{"001":0}"#).is_err());
        assert!(serde_json::from_str::<Coloring>("{}").is_err());
    }
}
