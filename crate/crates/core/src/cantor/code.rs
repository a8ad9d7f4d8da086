use std::fmt;

use serde::{Deserialize, Serialize};

use super::{canonicalize, Word};
use crate::{Error, Result};

/// A complete prefix code: a finite prefix-free set of words whose cylinders
/// partition the space (Kraft sum exactly one). Leaves are kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Word>", into = "Vec<Word>")]
pub struct PrefixCode {
    leaves: Vec<Word>,
}

/// Checks that sorted, deduplicated `words` are prefix-free and complete.
pub(crate) fn check_complete(words: &[Word]) -> Result<()> {
    if let Some(pair) = words.windows(2).find(|p| p[0].is_prefix_of(&p[1])) {
        return Err(Error::Invalid(format!(
            "{} and {} overlap",
            pair[0], pair[1]
        )));
    }
    if !canonicalize(words.iter().copied()).is_full() {
        return Err(Error::Invalid("code does not cover the whole space".into()));
    }
    Ok(())
}

/// Common refinement of two sorted complete codes: for every comparable pair
/// of leaves, the longer one.
pub(crate) fn common_refinement(a: &[Word], b: &[Word]) -> Vec<Word> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (x, y) = (a[i], b[j]);
        if x == y {
            out.push(x);
            i += 1;
            j += 1;
        } else if x.is_prefix_of(&y) {
            out.push(y);
            j += 1;
            if j == b.len() || !x.is_prefix_of(&b[j]) {
                i += 1;
            }
        } else if y.is_prefix_of(&x) {
            out.push(x);
            i += 1;
            if i == a.len() || !y.is_prefix_of(&a[i]) {
                j += 1;
            }
        } else {
            unreachable!("complete codes cannot have incomparable aligned leaves {x} {y}");
        }
    }
    out
}

/// Index of the word in the sorted prefix-free `words` that is a prefix of `x`.
pub(crate) fn prefix_index(words: &[Word], x: &Word) -> Option<usize> {
    let i = words.partition_point(|w| w <= x);
    (i > 0 && words[i - 1].is_prefix_of(x)).then(|| i - 1)
}

/// Range of sorted prefix-free `words` strictly extending `x`.
pub(crate) fn extensions(words: &[Word], x: &Word) -> std::ops::Range<usize> {
    let start = words.partition_point(|w| w <= x);
    let len = words[start..].partition_point(|w| x.is_prefix_of(w));
    start..start + len
}

impl PrefixCode {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut leaves: Vec<Word> = words.into_iter().collect();
        leaves.sort_unstable();
        let before = leaves.len();
        leaves.dedup();
        if leaves.len() != before {
            return Err(Error::Invalid("duplicate leaves".into()));
        }
        check_complete(&leaves)?;
        Ok(Self { leaves })
    }

    pub(crate) fn from_sorted_unchecked(leaves: Vec<Word>) -> Self {
        debug_assert!(check_complete(&leaves).is_ok());
        Self { leaves }
    }

    /// The one-leaf code `{ε}`.
    pub fn trivial() -> Self {
        Self {
            leaves: vec![Word::EMPTY],
        }
    }

    /// All words of length `depth`.
    pub fn uniform(depth: usize) -> Self {
        Self {
            leaves: Word::all_of_length(depth).collect(),
        }
    }

    pub fn leaves(&self) -> &[Word] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Kraft sum `Σ 2^-|w|`, as a float for display.
    pub fn kraft_sum(&self) -> f64 {
        self.leaves.iter().map(|w| 0.5f64.powi(w.len() as i32)).sum()
    }

    /// Replaces `leaf` by its two children.
    pub fn split(&self, leaf: &Word) -> Result<Self> {
        let i = self
            .leaves
            .binary_search(leaf)
            .map_err(|_| Error::Contract(format!("{leaf} is not a leaf")))?;
        let mut leaves = self.leaves.clone();
        leaves.splice(i..=i, leaf.children());
        Ok(Self { leaves })
    }

    pub fn common_refinement(&self, other: &PrefixCode) -> PrefixCode {
        PrefixCode {
            leaves: common_refinement(&self.leaves, &other.leaves),
        }
    }

    /// Every leaf of `self` lies inside a leaf of `coarse`.
    pub fn refines(&self, coarse: &PrefixCode) -> bool {
        self.leaves
            .iter()
            .all(|w| prefix_index(&coarse.leaves, w).is_some())
    }

    /// Leaf that is a prefix of `x`, if `x` is long enough.
    pub fn leaf_of(&self, x: &Word) -> Option<Word> {
        prefix_index(&self.leaves, x).map(|i| self.leaves[i])
    }

    /// Every complete prefix code with exactly `n` leaves, in a fixed order.
    pub fn all_with_leaves(n: usize) -> Vec<PrefixCode> {
        fn shapes(root: Word, n: usize) -> Vec<Vec<Word>> {
            if n == 1 {
                return vec![vec![root]];
            }
            let mut out = Vec::new();
            for left in 1..n {
                for l in shapes(root.child(0), left) {
                    for r in shapes(root.child(1), n - left) {
                        out.push(l.iter().chain(&r).copied().collect());
                    }
                }
            }
            out
        }
        if n == 0 {
            return Vec::new();
        }
        shapes(Word::EMPTY, n)
            .into_iter()
            .map(|leaves| PrefixCode { leaves })
            .collect()
    }
}

impl TryFrom<Vec<Word>> for PrefixCode {
    type Error = Error;

    fn try_from(words: Vec<Word>) -> Result<Self> {
        PrefixCode::new(words)
    }
}

impl From<PrefixCode> for Vec<Word> {
    fn from(c: PrefixCode) -> Self {
        c.leaves
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, w) in self.leaves.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(ws: &[&str]) -> PrefixCode {
        PrefixCode::new(ws.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PrefixCode::new(["0".parse().unwrap()]).is_err());
        assert!(PrefixCode::new(["0", "00", "1"].map(|s| s.parse().unwrap())).is_err());
        assert_eq!(code(&["0", "10", "11"]).kraft_sum(), 1.0);
    }

    #[test]
    fn refinement() {
        let a = code(&["0", "10", "11"]);
        let b = code(&["00", "01", "1"]);
        let r = a.common_refinement(&b);
        assert_eq!(r, code(&["00", "01", "10", "11"]));
        assert!(r.refines(&a) && r.refines(&b));
        assert!(!a.refines(&b));
    }

    #[test]
    fn shapes_are_catalan() {
        let counts: Vec<usize> = (1..=6).map(|n| PrefixCode::all_with_leaves(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 14, 42]);
    }
}
