//! Finite traces of maximal chains of closed subsets of the Cantor set.
//!
//! A [`ChainApprox`] is a complete prefix code together with a linear order on
//! its leaves. It stands for the maximal chain whose elements grow one leaf at
//! a time in that order; inside each leaf the chain continues along the
//! lexicographic (left-to-right) chain. Under this reading, splitting a leaf
//! `w` into `w0, w1` placed consecutively describes the same chain, and prefix
//! maps transport the within-leaf order faithfully. This is what makes the
//! automatic refinement used by every operation below compatible with the
//! group action.
//!
//! The chain elements visible at the code level are the order-prefixes
//! `{order[0],…,order[j]}`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cantor::{
    extensions, labelled_cylinders, prefix_index, ClopenSet, OrderedPartition, Permutation,
    PrefixCode, PrefixMap, UnorderedPartition, Word,
};
use crate::{Error, Result};

/// Order on the leaves of a complete prefix code, first leaf being the root.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Word>", into = "Vec<Word>")]
pub struct ChainApprox {
    order: Vec<Word>,
}

impl ChainApprox {
    pub fn new(order: Vec<Word>) -> Result<Self> {
        PrefixCode::new(order.iter().copied())?;
        Ok(Self { order })
    }

    /// The chain visiting the leaves of `code` left to right.
    pub fn lex(code: &PrefixCode) -> Self {
        Self {
            order: code.leaves().to_vec(),
        }
    }

    /// Every order on the leaves of `code`, i.e. all `n!` chains at that level.
    pub fn all_on(code: &PrefixCode) -> Vec<ChainApprox> {
        Permutation::all(code.len())
            .map(|p| Self {
                order: p.act(code.leaves()),
            })
            .collect()
    }

    pub fn order(&self) -> &[Word] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn code(&self) -> PrefixCode {
        PrefixCode::new(self.order.iter().copied()).expect("chain leaves form a code")
    }

    pub fn root(&self) -> Word {
        self.order[0]
    }

    pub fn position(&self, leaf: &Word) -> Option<usize> {
        self.order.iter().position(|w| w == leaf)
    }

    /// The order-prefix `{order[0],…,order[j]}` as a clopen set.
    pub fn element(&self, j: usize) -> ClopenSet {
        self.order[..=j].iter().copied().collect()
    }

    /// Same chain over the common refinement with the sorted complete code
    /// `code`; a split leaf is replaced by its sub-leaves in lexicographic order.
    pub fn refine_to(&self, code: &[Word]) -> ChainApprox {
        let mut order = Vec::with_capacity(self.order.len().max(code.len()));
        for u in &self.order {
            let sub = extensions(code, u);
            if sub.is_empty() {
                order.push(*u);
            } else {
                order.extend_from_slice(&code[sub]);
            }
        }
        ChainApprox { order }
    }

    /// Coarsest trace of the same chain: consecutive `w0, w1` are merged into
    /// `w` until no merge applies.
    pub fn normalized(&self) -> ChainApprox {
        let mut stack: Vec<Word> = Vec::with_capacity(self.order.len());
        for &w in &self.order {
            stack.push(w);
            while stack.len() >= 2 {
                let b = stack[stack.len() - 1];
                let a = stack[stack.len() - 2];
                if a.last_bit() == Some(0) && a.sibling() == Some(b) {
                    stack.truncate(stack.len() - 2);
                    stack.push(a.parent().unwrap());
                } else {
                    break;
                }
            }
        }
        ChainApprox { order: stack }
    }

    /// Both traces describe the same maximal chain.
    pub fn same_chain(&self, other: &ChainApprox) -> bool {
        self.normalized() == other.normalized()
    }
}

impl TryFrom<Vec<Word>> for ChainApprox {
    type Error = Error;

    fn try_from(order: Vec<Word>) -> Result<Self> {
        Self::new(order)
    }
}

impl From<ChainApprox> for Vec<Word> {
    fn from(c: ChainApprox) -> Self {
        c.order
    }
}

impl fmt::Display for ChainApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.order.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ChainApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain{self}")
    }
}

impl std::str::FromStr for ChainApprox {
    type Err = Error;

    /// Comma-separated leaves in chain order, e.g. `"10,00,11,01"`.
    fn from_str(s: &str) -> Result<Self> {
        let order = s
            .split(',')
            .map(|w| w.parse())
            .collect::<Result<Vec<Word>>>()?;
        ChainApprox::new(order)
    }
}

/// First-touch scan of `parts` along `c`: the part indices in order of first
/// touch, with the (refined) leaf at which each was touched.
fn first_touch(c: &ChainApprox, parts: &[ClopenSet]) -> Vec<(usize, Word)> {
    let labelled = labelled_cylinders(parts);
    let words: Vec<Word> = labelled.iter().map(|p| p.0).collect();
    let mut touched = vec![false; parts.len()];
    let mut out = Vec::with_capacity(parts.len());
    let mut visit = |idx: usize, leaf: Word, out: &mut Vec<(usize, Word)>| {
        if !touched[idx] {
            touched[idx] = true;
            out.push((idx, leaf));
        }
    };
    for u in c.order() {
        if let Some(i) = prefix_index(&words, u) {
            visit(labelled[i].1, *u, &mut out);
        } else {
            for i in extensions(&words, u) {
                visit(labelled[i].1, words[i], &mut out);
            }
        }
        if out.len() == parts.len() {
            break;
        }
    }
    out
}

pub fn root(c: &ChainApprox) -> Word {
    c.root()
}

/// `D_υ`: the shortest order-prefix whose union meets `d`.
pub fn hull_min(c: &ChainApprox, d: &ClopenSet) -> Result<Vec<Word>> {
    if d.is_empty() {
        return Err(Error::Precondition("hull_min of the empty set".into()));
    }
    let j = c
        .order()
        .iter()
        .position(|w| d.meets_cylinder(w))
        .expect("chain leaves cover the space");
    Ok(c.order()[..=j].to_vec())
}

/// `D^υ`: the longest order-prefix whose union lies inside `d`. Requires the
/// root leaf to lie in `d`.
pub fn hull_max(c: &ChainApprox, d: &ClopenSet) -> Result<Vec<Word>> {
    if !d.contains_cylinder(&c.root()) {
        return Err(Error::Precondition(format!(
            "root {} is not inside {d}",
            c.root()
        )));
    }
    let len = c
        .order()
        .iter()
        .take_while(|w| d.contains_cylinder(w))
        .count();
    Ok(c.order()[..len].to_vec())
}

/// `t*_c(α̃)`: the parts of `alpha` ordered by first touch along `c`.
pub fn induced_order(c: &ChainApprox, alpha: &UnorderedPartition) -> OrderedPartition {
    let parts = alpha.parts();
    let order = first_touch(c, parts);
    OrderedPartition::new_unchecked(order.iter().map(|&(i, _)| parts[i].clone()).collect())
}

/// `t*_c(β) = t*_c(t̃(β))`.
pub fn t_star(c: &ChainApprox, beta: &OrderedPartition) -> OrderedPartition {
    induced_order(c, &beta.unordered())
}

/// The induced order computed from its definition: `A < B` iff
/// `hull_min(A) ⊆ hull_min(B)`, after refining `c` so that `alpha` is
/// measurable.
pub fn induced_order_by_inclusion(c: &ChainApprox, alpha: &UnorderedPartition) -> Result<OrderedPartition> {
    let mut words: Vec<Word> = alpha
        .parts()
        .iter()
        .flat_map(|p| p.cylinders().iter().copied())
        .collect();
    words.sort_unstable();
    let refined = c.refine_to(&words);
    let hulls = alpha
        .parts()
        .iter()
        .map(|p| hull_min(&refined, p).map(|h| h.into_iter().collect::<BTreeSet<Word>>()))
        .collect::<Result<Vec<_>>>()?;
    let mut idx: Vec<usize> = (0..hulls.len()).collect();
    let mut incomparable = false;
    idx.sort_by(|&a, &b| {
        let (ha, hb) = (&hulls[a], &hulls[b]);
        if ha == hb {
            Ordering::Equal
        } else if ha.is_subset(hb) {
            Ordering::Less
        } else if hb.is_subset(ha) {
            Ordering::Greater
        } else {
            incomparable = true;
            Ordering::Equal
        }
    });
    if incomparable || idx.windows(2).any(|w| hulls[w[0]] == hulls[w[1]]) {
        return Err(Error::Invalid("hulls are not linearly ordered".into()));
    }
    Ok(OrderedPartition::new_unchecked(
        idx.iter().map(|&i| alpha.parts()[i].clone()).collect(),
    ))
}

/// `θ_β(c)`: the unique `σ` with `σ·β = t*_c(β)`.
pub fn theta(c: &ChainApprox, beta: &OrderedPartition) -> Permutation {
    let images = first_touch(c, beta.parts()).into_iter().map(|(i, _)| i).collect();
    Permutation::from_images(images).expect("first touch visits every part once")
}

/// Membership of `c` in the basic neighbourhood `U_α`: the induced order on
/// `alpha` is its own order.
pub fn in_neighborhood(c: &ChainApprox, alpha: &OrderedPartition) -> bool {
    // Walk the chain while each leaf sits inside one part; a leaf split
    // between parts falls back to the full first-touch computation.
    let parts = alpha.parts();
    let mut next = 0;
    for u in c.order() {
        match parts.iter().position(|p| p.contains_cylinder(u)) {
            Some(j) if j > next => return false,
            Some(j) => next += (j == next) as usize,
            None => {
                return first_touch(c, parts)
                    .iter()
                    .enumerate()
                    .all(|(j, &(i, _))| i == j)
            }
        }
        if next == parts.len() {
            return true;
        }
    }
    next == parts.len()
}

/// `g·c`: the chain whose elements are the `g`-images of the elements of `c`.
pub fn act_chain(g: &PrefixMap, c: &ChainApprox) -> ChainApprox {
    let domain: Vec<Word> = g.pairs().iter().map(|p| p.0).collect();
    let order = c
        .refine_to(&domain)
        .order
        .iter()
        .map(|w| g.apply_word(w).expect("refined leaf reaches the domain"))
        .collect();
    ChainApprox { order }
}

/// Replaces `leaf` by `first_child` in place and inserts its sibling so that it
/// ends up at index `insert_pos` (0-based) of the result.
pub fn refine_chain(c: &ChainApprox, leaf: &Word, first_child: &Word, insert_pos: usize) -> Result<ChainApprox> {
    let pos = c
        .position(leaf)
        .ok_or_else(|| Error::Contract(format!("{leaf} is not a leaf of {c}")))?;
    if first_child.parent() != Some(*leaf) {
        return Err(Error::Contract(format!("{first_child} is not a child of {leaf}")));
    }
    if insert_pos <= pos || insert_pos > c.len() {
        return Err(Error::Contract(format!(
            "insert position {insert_pos} must lie in {}..={}",
            pos + 1,
            c.len()
        )));
    }
    let mut order = c.order.clone();
    order[pos] = *first_child;
    order.insert(insert_pos, first_child.sibling().unwrap());
    Ok(ChainApprox { order })
}

/// The trace of `c` on the coarser code: leaves replaced by the coarse leaf
/// containing them, keeping first occurrences.
pub fn project_chain(c: &ChainApprox, coarse: &PrefixCode) -> Result<ChainApprox> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::with_capacity(coarse.len());
    for w in c.order() {
        let up = coarse
            .leaf_of(w)
            .ok_or_else(|| Error::Contract(format!("{w} is not inside a leaf of {coarse}")))?;
        if seen.insert(up) {
            order.push(up);
        }
    }
    Ok(ChainApprox { order })
}

/// First-touch leaves `x_1,…,x_m`, one per part of `alpha`, in induced order.
pub fn entry_points(c: &ChainApprox, alpha: &OrderedPartition) -> Vec<Word> {
    first_touch(c, alpha.parts()).into_iter().map(|(_, w)| w).collect()
}
