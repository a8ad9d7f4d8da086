use std::fmt;

use serde::{Deserialize, Serialize};

use super::Word;

/// A clopen subset of the Cantor set in canonical form: the sorted set of
/// maximal cylinders it contains. Canonical forms are unique, so structural
/// equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Word>", into = "Vec<Word>")]
pub struct ClopenSet {
    cylinders: Vec<Word>,
}

/// Canonical form of the union of the given cylinders.
pub fn canonicalize(words: impl IntoIterator<Item = Word>) -> ClopenSet {
    let mut words: Vec<Word> = words.into_iter().collect();
    words.sort_unstable();
    words.dedup();
    let mut stack: Vec<Word> = Vec::with_capacity(words.len());
    for w in words {
        if let Some(top) = stack.last() {
            if top.is_prefix_of(&w) {
                continue;
            }
        }
        stack.push(w);
        while stack.len() >= 2 {
            let b = stack[stack.len() - 1];
            let a = stack[stack.len() - 2];
            if a.last_bit() == Some(0) && a.sibling() == Some(b) {
                stack.truncate(stack.len() - 2);
                stack.push(a.parent().expect("sibling has a parent"));
            } else {
                break;
            }
        }
    }
    ClopenSet { cylinders: stack }
}

fn complement_within(node: Word, words: &[Word], out: &mut Vec<Word>) {
    match words {
        [] => out.push(node),
        [only] if *only == node => {}
        _ => {
            let right = node.child(1);
            let split = words.partition_point(|w| *w < right);
            complement_within(node.child(0), &words[..split], out);
            complement_within(right, &words[split..], out);
        }
    }
}

impl ClopenSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole space.
    pub fn full() -> Self {
        Self {
            cylinders: vec![Word::EMPTY],
        }
    }

    pub fn cylinder(w: Word) -> Self {
        Self { cylinders: vec![w] }
    }

    pub fn cylinders(&self) -> &[Word] {
        &self.cylinders
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cylinders == [Word::EMPTY]
    }

    /// Lexicographically least cylinder.
    pub fn first(&self) -> Option<Word> {
        self.cylinders.first().copied()
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        canonicalize(self.cylinders.iter().chain(&other.cylinders).copied())
    }

    pub fn intersection(&self, other: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for a in &self.cylinders {
            for b in &other.cylinders {
                if a.is_prefix_of(b) {
                    out.push(*b);
                } else if b.is_prefix_of(a) {
                    out.push(*a);
                }
            }
        }
        canonicalize(out)
    }

    pub fn complement(&self) -> ClopenSet {
        let mut out = Vec::new();
        complement_within(Word::EMPTY, &self.cylinders, &mut out);
        ClopenSet { cylinders: out }
    }

    pub fn difference(&self, other: &ClopenSet) -> ClopenSet {
        self.intersection(&other.complement())
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.cylinders.iter().all(|w| other.contains_cylinder(w))
    }

    /// The cylinder of `w` lies inside `self`. Canonical forms make this a
    /// prefix test.
    pub fn contains_cylinder(&self, w: &Word) -> bool {
        let i = self.cylinders.partition_point(|c| c <= w);
        i > 0 && self.cylinders[i - 1].is_prefix_of(w)
    }

    /// The cylinder of `w` meets `self`.
    pub fn meets_cylinder(&self, w: &Word) -> bool {
        self.contains_cylinder(w) || {
            let i = self.cylinders.partition_point(|c| c < w);
            i < self.cylinders.len() && w.is_prefix_of(&self.cylinders[i])
        }
    }

    pub fn meets(&self, other: &ClopenSet) -> bool {
        other.cylinders.iter().any(|w| self.meets_cylinder(w))
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        !self.meets(other)
    }

    /// Membership of a point given by a finite prefix `x`: `Some` once `x` is
    /// long enough to decide.
    pub fn decides(&self, x: &Word) -> Option<bool> {
        if self.contains_cylinder(x) {
            Some(true)
        } else if self.meets_cylinder(x) {
            None
        } else {
            Some(false)
        }
    }

    pub fn max_len(&self) -> usize {
        self.cylinders.iter().map(Word::len).max().unwrap_or(0)
    }
}

impl From<Vec<Word>> for ClopenSet {
    fn from(words: Vec<Word>) -> Self {
        canonicalize(words)
    }
}

impl From<ClopenSet> for Vec<Word> {
    fn from(c: ClopenSet) -> Self {
        c.cylinders
    }
}

impl FromIterator<Word> for ClopenSet {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        canonicalize(iter)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, w) in self.cylinders.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}

impl std::str::FromStr for ClopenSet {
    type Err = crate::Error;

    /// Comma-separated cylinders; `"∅"` is the empty set and `"ε"` the whole space.
    fn from_str(s: &str) -> crate::Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s == "∅" {
            return Ok(ClopenSet::empty());
        }
        s.split(',').map(str::parse::<Word>).collect()
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
