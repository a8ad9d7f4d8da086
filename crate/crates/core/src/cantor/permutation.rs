use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::{Error, Result};

/// A permutation `σ` of `{1,…,k}`, stored 0-based.
///
/// `σ` acts on a sequence `(B_1,…,B_k)` by `σ(B_1,…,B_k) = (B_σ(1),…,B_σ(k))`.
/// The product is chosen so that this is a left action:
/// `(σ * τ)·β = σ·(τ·β)`, i.e. `(σ * τ)(i) = τ(σ(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Self {
            images: (0..k).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Invalid(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self { images })
    }

    /// From 1-based one-line notation `(σ(1),…,σ(k))`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::Invalid("one-line notation is 1-based".into()));
        }
        Self::from_images(one_line.iter().map(|&i| i - 1).collect())
    }

    /// The transposition exchanging `i` and `j` (0-based).
    pub fn transposition(k: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..k).collect();
        images.swap(i, j);
        Self { images }
    }

    pub fn k(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)`, 0-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.k()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Self { images }
    }

    /// Composition of index maps, `(self ∘ inner)(i) = self(inner(i))`.
    /// Equal to `inner * self`.
    pub fn compose(&self, inner: &Permutation) -> Permutation {
        assert_eq!(self.k(), inner.k(), "permutation size mismatch");
        Permutation {
            images: inner.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// `σ·(x_1,…,x_k) = (x_σ(1),…,x_σ(k))`.
    pub fn act<T: Clone>(&self, items: &[T]) -> Vec<T> {
        assert_eq!(items.len(), self.k(), "permutation size mismatch");
        self.images.iter().map(|&i| items[i].clone()).collect()
    }

    /// Position in the lexicographic order of one-line notations.
    pub fn rank(&self) -> usize {
        let k = self.k();
        let mut rank = 0;
        for i in 0..k {
            let smaller_later = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count();
            rank = rank * (k - i) + smaller_later;
        }
        rank
    }

    pub fn unrank(k: usize, mut rank: usize) -> Self {
        let mut digits = vec![0; k];
        for i in (0..k).rev() {
            let base = k - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..k).collect();
        let images = digits.into_iter().map(|d| pool.remove(d)).collect();
        Self { images }
    }

    /// All of `S_k` in lexicographic order.
    pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
        (0..factorial(k)).map(move |r| Permutation::unrank(k, r))
    }
}

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.k(), rhs.k(), "permutation size mismatch");
        Permutation {
            images: self.images.iter().map(|&i| rhs.images[i]).collect(),
        }
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        &self * &rhs
    }
}

impl fmt::Display for Permutation {
    /// One-line notation: `213`, or comma-separated beyond nine points.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.k() > 9 { "," } else { "" };
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let one_line: Result<Vec<usize>> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad entry in {s:?}"))))
                .collect()
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad digit in {s:?}")))
                })
                .collect()
        };
        Permutation::from_one_line(&one_line?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_a_left_action() {
        let items = ["a", "b", "c", "d"];
        for s in Permutation::all(4) {
            for t in Permutation::all(4) {
                assert_eq!((&s * &t).act(&items), s.act(&t.act(&items)));
            }
            assert!((&s * &s.inverse()).is_identity());
        }
    }

    #[test]
    fn rank_round_trip() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0].images < w[1].images));
        for (r, p) in all.iter().enumerate() {
            assert_eq!(p.rank(), r);
        }
    }

    #[test]
    fn one_line_text() {
        let p: Permutation = "231".parse().unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
        assert_eq!(p.to_string(), "231");
        assert!("221".parse::<Permutation>().is_err());
        assert!("1,2,4".parse::<Permutation>().is_err());
    }
}
