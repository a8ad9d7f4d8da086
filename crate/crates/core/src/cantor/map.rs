use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::code::{check_complete, common_refinement, extensions, prefix_index};
use super::{canonicalize, ClopenSet, PrefixCode, Word};
use crate::{Error, Result};

/// A homeomorphism of the Cantor set given by prefix replacement: a bijection
/// between the leaves of two complete prefix codes, acting by `u·s ↦ v·s`.
///
/// Maps are kept reduced (no pair of sibling leaves is sent to a sibling pair
/// in order), which makes the representation unique; `==` is equality of
/// homeomorphisms.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct PrefixMap {
    // Sorted by domain leaf.
    pairs: Vec<(Word, Word)>,
}

fn reduce(mut pairs: Vec<(Word, Word)>) -> Vec<(Word, Word)> {
    pairs.sort_unstable();
    let mut stack: Vec<(Word, Word)> = Vec::with_capacity(pairs.len());
    for p in pairs {
        stack.push(p);
        while stack.len() >= 2 {
            let (u1, v1) = stack[stack.len() - 1];
            let (u0, v0) = stack[stack.len() - 2];
            let merges = u0.last_bit() == Some(0)
                && u0.sibling() == Some(u1)
                && v0.last_bit() == Some(0)
                && v0.sibling() == Some(v1);
            if !merges {
                break;
            }
            stack.truncate(stack.len() - 2);
            stack.push((u0.parent().unwrap(), v0.parent().unwrap()));
        }
    }
    stack
}

impl PrefixMap {
    pub fn identity() -> Self {
        Self {
            pairs: vec![(Word::EMPTY, Word::EMPTY)],
        }
    }

    /// Builds the map `u_i·s ↦ v_i·s`. Both sides must be complete prefix codes.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Word, Word)>) -> Result<Self> {
        let pairs: Vec<(Word, Word)> = pairs.into_iter().collect();
        let mut domain: Vec<Word> = pairs.iter().map(|p| p.0).collect();
        let mut range: Vec<Word> = pairs.iter().map(|p| p.1).collect();
        domain.sort_unstable();
        range.sort_unstable();
        for (side, words) in [("domain", &mut domain), ("range", &mut range)] {
            let n = words.len();
            words.dedup();
            if words.len() != n {
                return Err(Error::Invalid(format!("{side} repeats a leaf")));
            }
            check_complete(words).map_err(|e| Error::Invalid(format!("{side}: {e}")))?;
        }
        Ok(Self {
            pairs: reduce(pairs),
        })
    }

    /// Builds a map pairing the leaves of `domain` with `range` in the given
    /// orders.
    pub fn from_codes(domain: &[Word], range: &[Word]) -> Result<Self> {
        if domain.len() != range.len() {
            return Err(Error::Contract(format!(
                "codes have {} and {} leaves",
                domain.len(),
                range.len()
            )));
        }
        Self::from_pairs(domain.iter().copied().zip(range.iter().copied()))
    }

    /// Leaf pairs in domain order.
    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn domain(&self) -> PrefixCode {
        PrefixCode::from_sorted_unchecked(self.pairs.iter().map(|p| p.0).collect())
    }

    pub fn range(&self) -> PrefixCode {
        let mut r: Vec<Word> = self.pairs.iter().map(|p| p.1).collect();
        r.sort_unstable();
        PrefixCode::from_sorted_unchecked(r)
    }

    pub fn is_identity(&self) -> bool {
        self.pairs == [(Word::EMPTY, Word::EMPTY)]
    }

    /// Image of the point prefix `x`, once `x` reaches a domain leaf.
    pub fn apply_word(&self, x: &Word) -> Option<Word> {
        let i = self.pairs.partition_point(|p| p.0 <= *x);
        if i == 0 {
            return None;
        }
        let (u, v) = self.pairs[i - 1];
        x.replace_prefix(&u, &v)
    }

    /// Image of a cylinder as a clopen set.
    pub fn apply_cylinder(&self, w: &Word) -> ClopenSet {
        match self.apply_word(w) {
            Some(v) => ClopenSet::cylinder(v),
            None => {
                let start = self.pairs.partition_point(|p| p.0 <= *w);
                self.pairs[start..]
                    .iter()
                    .take_while(|p| w.is_prefix_of(&p.0))
                    .map(|p| p.1)
                    .collect()
            }
        }
    }

    pub fn apply_clopen(&self, c: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for w in c.cylinders() {
            match self.apply_word(w) {
                Some(v) => out.push(v),
                None => {
                    let start = self.pairs.partition_point(|p| p.0 <= *w);
                    out.extend(
                        self.pairs[start..]
                            .iter()
                            .take_while(|p| w.is_prefix_of(&p.0))
                            .map(|p| p.1),
                    );
                }
            }
        }
        canonicalize(out)
    }

    pub fn inverse(&self) -> PrefixMap {
        let mut pairs: Vec<(Word, Word)> = self.pairs.iter().map(|&(u, v)| (v, u)).collect();
        pairs.sort_unstable();
        PrefixMap { pairs }
    }

    /// `self ∘ inner`: `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &PrefixMap) -> PrefixMap {
        let mut by_range: Vec<(Word, Word)> = inner.pairs.iter().map(|&(u, v)| (v, u)).collect();
        by_range.sort_unstable();
        let inner_range: Vec<Word> = by_range.iter().map(|p| p.0).collect();
        let outer_domain: Vec<Word> = self.pairs.iter().map(|p| p.0).collect();
        let pairs = common_refinement(&inner_range, &outer_domain)
            .into_iter()
            .map(|w| {
                let (v, u) = by_range[prefix_index(&inner_range, &w).expect("refinement")];
                let pre = w.replace_prefix(&v, &u).expect("prefix");
                let post = self.apply_word(&w).expect("refinement reaches domain");
                (pre, post)
            })
            .collect();
        PrefixMap {
            pairs: reduce(pairs),
        }
    }

    /// Unreduced leaf pairs over the common refinement of the domain with
    /// `code` (sorted, complete). Each pair maps a leaf cylinder onto a leaf
    /// cylinder.
    pub fn expanded_pairs(&self, code: &[Word]) -> Vec<(Word, Word)> {
        let domain: Vec<Word> = self.pairs.iter().map(|p| p.0).collect();
        common_refinement(&domain, code)
            .into_iter()
            .map(|w| (w, self.apply_word(&w).expect("refinement reaches domain")))
            .collect()
    }

    /// `self` restricted to the cylinder of `w` is the identity.
    pub fn fixes_pointwise(&self, w: &Word) -> bool {
        if let Some(i) = prefix_index(&self.pairs.iter().map(|p| p.0).collect::<Vec<_>>(), w) {
            let (u, v) = self.pairs[i];
            return u == v;
        }
        let domain: Vec<Word> = self.pairs.iter().map(|p| p.0).collect();
        self.pairs[extensions(&domain, w)].iter().all(|(u, v)| u == v)
    }

    /// Longest leaf on either side.
    pub fn depth(&self) -> usize {
        self.pairs
            .iter()
            .map(|(u, v)| u.len().max(v.len()))
            .max()
            .unwrap_or(0)
    }
}

/// Free-function form of [`PrefixMap::compose`]: `x ↦ f(g(x))`.
pub fn compose(f: &PrefixMap, g: &PrefixMap) -> PrefixMap {
    f.compose(g)
}

/// Free-function form of [`PrefixMap::inverse`].
pub fn invert(f: &PrefixMap) -> PrefixMap {
    f.inverse()
}

impl fmt::Display for PrefixMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (u, v)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}→{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PrefixMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrefixMap({self})")
    }
}

fn parse_pair(s: &str) -> Result<(Word, Word)> {
    let (u, v) = s
        .split_once('→')
        .or_else(|| s.split_once("->"))
        .ok_or_else(|| Error::Parse(format!("expected `u→v`, got {s:?}")))?;
    Ok((u.parse()?, v.parse()?))
}

impl FromStr for PrefixMap {
    type Err = Error;

    /// Comma-separated `u→v` (or `u->v`) pairs; `id` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "id" {
            return Ok(PrefixMap::identity());
        }
        let pairs = s
            .split(',')
            .map(|p| parse_pair(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        PrefixMap::from_pairs(pairs)
    }
}

impl TryFrom<Vec<String>> for PrefixMap {
    type Error = Error;

    fn try_from(items: Vec<String>) -> Result<Self> {
        let pairs = items
            .iter()
            .map(|p| parse_pair(p))
            .collect::<Result<Vec<_>>>()?;
        PrefixMap::from_pairs(pairs)
    }
}

impl From<PrefixMap> for Vec<String> {
    fn from(m: PrefixMap) -> Self {
        let bits = |w: &Word| serde_json::to_value(w).unwrap().as_str().unwrap().to_owned();
        m.pairs
            .iter()
            .map(|(u, v)| format!("{}→{}", bits(u), bits(v)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn c(ws: &[&str]) -> ClopenSet {
        ws.iter().map(|s| w(s)).collect()
    }

    fn example() -> PrefixMap {
        "0→00,10→01,11→1".parse().unwrap()
    }

    #[test]
    fn group_laws_on_example() {
        let f = example();
        assert!(f.compose(&f.inverse()).is_identity());
        assert!(f.inverse().compose(&f).is_identity());
        assert_eq!(PrefixMap::identity().compose(&f), f);
        assert_eq!(f.compose(&PrefixMap::identity()), f);
        let x = w("0111");
        let y = f.apply_word(&x).unwrap();
        assert_eq!(y, w("00111"));
        assert_eq!(f.inverse().apply_word(&y), Some(x));
    }

    #[test]
    fn reduction_merges_sibling_pairs() {
        let f: PrefixMap = "00→10,01→11,1→0".parse().unwrap();
        assert_eq!(f.pairs(), &[(w("0"), w("1")), (w("1"), w("0"))]);
        let id: PrefixMap = "00→00,01→01,10→10,11→11".parse().unwrap();
        assert!(id.is_identity());
        let swap: PrefixMap = "00→01,01→00,1→1".parse().unwrap();
        assert_eq!(swap.pairs().len(), 3);
    }

    #[test]
    fn clopen_images() {
        let g = example();
        assert_eq!(g.apply_clopen(&c(&["0"])), c(&["00"]));
        assert_eq!(g.apply_clopen(&c(&["1"])), c(&["01", "1"]));
        assert_eq!(g.apply_clopen(&ClopenSet::full()), ClopenSet::full());
        assert_eq!(PrefixMap::identity().apply_clopen(&c(&["01", "1"])), c(&["01", "1"]));
    }

    #[test]
    fn rejects_incomplete_codes() {
        assert!("0→0".parse::<PrefixMap>().is_err());
        assert!("0→0,1→0".parse::<PrefixMap>().is_err());
        assert!("0→1,1→0".parse::<PrefixMap>().is_ok());
    }

    #[test]
    fn pointwise_fixing() {
        let g: PrefixMap = "00→00,01→1,1→01".parse().unwrap();
        assert!(g.fixes_pointwise(&w("00")));
        assert!(g.fixes_pointwise(&w("001")));
        assert!(!g.fixes_pointwise(&w("0")));
        assert!(!g.fixes_pointwise(&w("01")));
    }

    #[test]
    fn json_round_trip() {
        let g = example();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"["0→00","10→01","11→1"]"#);
        assert_eq!(serde_json::from_str::<PrefixMap>(&json).unwrap(), g);
        let id = serde_json::to_string(&PrefixMap::identity()).unwrap();
        assert_eq!(id, r#"["→"]"#);
        assert!(serde_json::from_str::<PrefixMap>(&id).unwrap().is_identity());
    }
}
