use std::fmt;

use serde::{Deserialize, Serialize};

use super::code::{check_complete, prefix_index};
use super::{ClopenSet, Permutation, PrefixMap, Word};
use crate::partitions::SetPartition;
use crate::{Error, Result};

/// A finite ordered clopen partition `(A_1,…,A_k)` of the Cantor set: nonempty,
/// pairwise disjoint parts covering the space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<ClopenSet>", into = "Vec<ClopenSet>")]
pub struct OrderedPartition {
    parts: Vec<ClopenSet>,
}

/// A finite unordered clopen partition `{A_1,…,A_k}`, stored with parts
/// sorted by their least cylinder.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<ClopenSet>", into = "Vec<ClopenSet>")]
pub struct UnorderedPartition {
    parts: Vec<ClopenSet>,
}

fn validate(parts: &[ClopenSet]) -> Result<()> {
    if let Some(i) = parts.iter().position(ClopenSet::is_empty) {
        return Err(Error::Invalid(format!("part {} is empty", i + 1)));
    }
    let mut all: Vec<Word> = parts.iter().flat_map(|p| p.cylinders().iter().copied()).collect();
    all.sort_unstable();
    let n = all.len();
    all.dedup();
    if all.len() != n {
        return Err(Error::Invalid("parts overlap".into()));
    }
    check_complete(&all).map_err(|e| Error::Invalid(format!("not a partition: {e}")))
}

/// Cylinders of all parts with their part index, sorted by cylinder. Forms a
/// complete prefix code.
pub(crate) fn labelled_cylinders(parts: &[ClopenSet]) -> Vec<(Word, usize)> {
    let mut out: Vec<(Word, usize)> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.cylinders().iter().map(move |&w| (w, i)))
        .collect();
    out.sort_unstable();
    out
}

impl OrderedPartition {
    pub fn new(parts: Vec<ClopenSet>) -> Result<Self> {
        validate(&parts)?;
        Ok(Self { parts })
    }

    pub(crate) fn new_unchecked(parts: Vec<ClopenSet>) -> Self {
        debug_assert!(validate(&parts).is_ok());
        Self { parts }
    }

    /// The one-part partition `(X)`.
    pub fn trivial() -> Self {
        Self {
            parts: vec![ClopenSet::full()],
        }
    }

    /// Parts are the given leaves, in order.
    pub fn from_leaves(leaves: &[Word]) -> Result<Self> {
        Self::new(leaves.iter().map(|&w| ClopenSet::cylinder(w)).collect())
    }

    pub fn parts(&self) -> &[ClopenSet] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &ClopenSet {
        &self.parts[i]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The forgetful map `t̃`.
    pub fn unordered(&self) -> UnorderedPartition {
        UnorderedPartition::from_parts(self.parts.clone())
    }

    /// `σ(B_1,…,B_k) = (B_σ(1),…,B_σ(k))`.
    pub fn permute(&self, sigma: &Permutation) -> Result<OrderedPartition> {
        if sigma.k() != self.len() {
            return Err(Error::Contract(format!(
                "permutation of {} points applied to {} parts",
                sigma.k(),
                self.len()
            )));
        }
        Ok(Self {
            parts: sigma.act(&self.parts),
        })
    }

    /// The unique `σ` with `σ·self == target`, if `target` reorders `self`.
    pub fn permutation_to(&self, target: &OrderedPartition) -> Option<Permutation> {
        if self.len() != target.len() {
            return None;
        }
        let images = target
            .parts
            .iter()
            .map(|t| self.parts.iter().position(|p| p == t))
            .collect::<Option<Vec<_>>>()?;
        Permutation::from_images(images).ok()
    }

    /// Index of the part containing the cylinder of `x`, if decided.
    pub fn part_of(&self, x: &Word) -> Option<usize> {
        self.parts.iter().position(|p| p.contains_cylinder(x))
    }

    /// `α ∨ β`: nonempty intersections `A_i ∩ B_j` in lexicographic `(i,j)`
    /// order.
    pub fn join(&self, other: &OrderedPartition) -> OrderedPartition {
        let parts = self
            .parts
            .iter()
            .flat_map(|a| other.parts.iter().map(move |b| a.intersection(b)))
            .filter(|p| !p.is_empty())
            .collect();
        Self { parts }
    }

    /// Every part of `self` lies inside some part of `coarse`.
    pub fn refines(&self, coarse: &OrderedPartition) -> bool {
        self.parts
            .iter()
            .all(|p| coarse.parts.iter().any(|q| p.is_subset(q)))
    }

    /// Every part is a union of leaves of the sorted complete code `code`.
    pub fn is_measurable(&self, code: &[Word]) -> bool {
        self.parts
            .iter()
            .flat_map(|p| p.cylinders())
            .all(|w| match prefix_index(code, w) {
                Some(i) => code[i] == *w,
                None => true,
            })
    }

    /// Amalgamated cover `α_γ`: part `j` is the union of the parts indexed by
    /// block `j` of `gamma`.
    pub fn amalgamate(&self, gamma: &SetPartition) -> Result<OrderedPartition> {
        if gamma.n() != self.len() {
            return Err(Error::Contract(format!(
                "index partition over {} elements for {} parts",
                gamma.n(),
                self.len()
            )));
        }
        let parts = gamma
            .blocks()
            .iter()
            .map(|block| {
                block
                    .iter()
                    .flat_map(|&i| self.parts[i - 1].cylinders().iter().copied())
                    .collect()
            })
            .collect();
        Ok(Self { parts })
    }

    pub fn apply(&self, g: &PrefixMap) -> OrderedPartition {
        Self {
            parts: self.parts.iter().map(|p| g.apply_clopen(p)).collect(),
        }
    }
}

impl UnorderedPartition {
    pub fn new(parts: Vec<ClopenSet>) -> Result<Self> {
        validate(&parts)?;
        Ok(Self::from_parts(parts))
    }

    fn from_parts(mut parts: Vec<ClopenSet>) -> Self {
        parts.sort_unstable_by_key(|p| p.first());
        Self { parts }
    }

    pub fn parts(&self) -> &[ClopenSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The parts in canonical order, as an ordered partition.
    pub fn to_ordered(&self) -> OrderedPartition {
        OrderedPartition {
            parts: self.parts.clone(),
        }
    }

    pub fn apply(&self, g: &PrefixMap) -> UnorderedPartition {
        Self::from_parts(self.parts.iter().map(|p| g.apply_clopen(p)).collect())
    }

    pub fn join(&self, other: &UnorderedPartition) -> UnorderedPartition {
        Self::from_parts(self.to_ordered().join(&other.to_ordered()).parts)
    }
}

impl TryFrom<Vec<ClopenSet>> for OrderedPartition {
    type Error = Error;

    fn try_from(parts: Vec<ClopenSet>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<OrderedPartition> for Vec<ClopenSet> {
    fn from(p: OrderedPartition) -> Self {
        p.parts
    }
}

impl TryFrom<Vec<ClopenSet>> for UnorderedPartition {
    type Error = Error;

    fn try_from(parts: Vec<ClopenSet>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<UnorderedPartition> for Vec<ClopenSet> {
    fn from(p: UnorderedPartition) -> Self {
        p.parts
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[ClopenSet], open: &str, close: &str) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, "{close}")
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.parts, "(", ")")
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UnorderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.parts, "{", "}")
    }
}

impl fmt::Debug for UnorderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for OrderedPartition {
    type Err = Error;

    /// Parts separated by `|`, cylinders within a part by `,`:
    /// `"00,1|01"` is `({00,1},{01})`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('|')
            .map(|part| {
                part.split(',')
                    .map(|w| w.parse::<Word>())
                    .collect::<Result<ClopenSet>>()
            })
            .collect::<Result<Vec<_>>>()?;
        OrderedPartition::new(parts)
    }
}

/// `g(A_1,…,A_k) = (g A_1,…,g A_k)`.
pub fn apply_partition(g: &PrefixMap, alpha: &OrderedPartition) -> OrderedPartition {
    alpha.apply(g)
}

/// Free-function form of [`OrderedPartition::join`].
pub fn join(alpha: &OrderedPartition, beta: &OrderedPartition) -> OrderedPartition {
    alpha.join(beta)
}

// Splits the lexicographically last cylinder until `words` has `target` entries.
fn pad(words: &mut Vec<Word>, target: usize) {
    while words.len() < target {
        let last = words.pop().expect("parts are nonempty");
        words.extend(last.children());
    }
}

/// A homeomorphism `h` with `h A_i = B_i` for all `i`.
///
/// Within each part both cylinder lists are padded to equal length by
/// repeatedly splitting their lexicographically last cylinder, then paired in
/// lexicographic order.
pub fn homogeneity_witness(alpha: &OrderedPartition, beta: &OrderedPartition) -> Result<PrefixMap> {
    if alpha.len() != beta.len() {
        return Err(Error::Contract(format!(
            "partitions have {} and {} parts",
            alpha.len(),
            beta.len()
        )));
    }
    let mut pairs = Vec::new();
    for (a, b) in alpha.parts.iter().zip(&beta.parts) {
        let mut from = a.cylinders().to_vec();
        let mut to = b.cylinders().to_vec();
        let n = from.len().max(to.len());
        pad(&mut from, n);
        pad(&mut to, n);
        pairs.extend(from.into_iter().zip(to));
    }
    PrefixMap::from_pairs(pairs)
}

/// Membership of `g` in the clopen subgroup `H_α = {g : g A_i = A_i}`.
pub fn stabilizes(g: &PrefixMap, alpha: &OrderedPartition) -> bool {
    alpha.parts.iter().all(|a| g.apply_clopen(a) == *a)
}
