use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Longest word representable by [`Word`].
pub const MAX_WORD_LEN: usize = 128;

/// A finite binary word, denoting the cylinder of all sequences extending it.
///
/// Bits are stored left-aligned in a `u128`, so lexicographic order (with a
/// prefix sorting before its extensions) is the order on `(bits, len)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u128,
    len: u8,
}

fn mask(len: usize) -> u128 {
    if len == 0 {
        0
    } else {
        !0u128 << (MAX_WORD_LEN - len)
    }
}

impl Word {
    /// The empty word, i.e. the whole space.
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    pub fn from_bits(bits: &[u8]) -> Word {
        bits.iter().fold(Word::EMPTY, |w, &b| w.child(b))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at position `i` (0-based).
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i < self.len(), "bit {i} out of range for {self}");
        ((self.bits >> (MAX_WORD_LEN - 1 - i)) & 1) as u8
    }

    /// `self` followed by `b`.
    ///
    /// # Panics
    /// If the result would exceed [`MAX_WORD_LEN`].
    pub fn child(&self, b: u8) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word exceeds {MAX_WORD_LEN} bits");
        let bits = self.bits | ((b as u128 & 1) << (MAX_WORD_LEN - 1 - self.len()));
        Word {
            bits,
            len: self.len + 1,
        }
    }

    pub fn children(&self) -> [Word; 2] {
        [self.child(0), self.child(1)]
    }

    pub fn parent(&self) -> Option<Word> {
        (self.len > 0).then(|| self.truncate(self.len() - 1))
    }

    pub fn sibling(&self) -> Option<Word> {
        (self.len > 0).then(|| Word {
            bits: self.bits ^ (1u128 << (MAX_WORD_LEN - self.len())),
            len: self.len,
        })
    }

    pub fn last_bit(&self) -> Option<u8> {
        (self.len > 0).then(|| self.bit(self.len() - 1))
    }

    /// First `len` bits.
    pub fn truncate(&self, len: usize) -> Word {
        let len = len.min(self.len());
        Word {
            bits: self.bits & mask(len),
            len: len as u8,
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && (self.bits ^ other.bits) & mask(self.len()) == 0
    }

    pub fn is_proper_prefix_of(&self, other: &Word) -> bool {
        self.len < other.len && self.is_prefix_of(other)
    }

    /// Cylinders of comparable words intersect.
    pub fn is_comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// `self` followed by `suffix`.
    ///
    /// # Panics
    /// If the result would exceed [`MAX_WORD_LEN`].
    pub fn concat(&self, suffix: &Word) -> Word {
        let len = self.len() + suffix.len();
        assert!(len <= MAX_WORD_LEN, "word exceeds {MAX_WORD_LEN} bits");
        let shifted = suffix.bits.checked_shr(self.len() as u32).unwrap_or(0);
        Word {
            bits: self.bits | shifted,
            len: len as u8,
        }
    }

    /// `Some(s)` with `prefix · s == self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        prefix.is_prefix_of(self).then(|| Word {
            bits: self.bits.checked_shl(prefix.len() as u32).unwrap_or(0),
            len: self.len - prefix.len,
        })
    }

    /// Replaces the prefix `from` by `to`; `None` if `from` is not a prefix.
    pub fn replace_prefix(&self, from: &Word, to: &Word) -> Option<Word> {
        self.strip_prefix(from).map(|rest| to.concat(&rest))
    }

    /// All words of length `len` in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "refusing to enumerate 2^{len} words");
        (0u64..(1u64 << len)).map(move |v| {
            let bits = if len == 0 {
                0
            } else {
                (v as u128) << (MAX_WORD_LEN - len)
            };
            Word {
                bits,
                len: len as u8,
            }
        })
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits.cmp(&other.bits).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for i in 0..self.len() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `0`/`1` strings; `""` and `"ε"` denote the empty word.
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "ε" {
            return Ok(Word::EMPTY);
        }
        if s.len() > MAX_WORD_LEN {
            return Err(Error::Parse(format!("word longer than {MAX_WORD_LEN} bits")));
        }
        s.chars().try_fold(Word::EMPTY, |w, c| match c {
            '0' => Ok(w.child(0)),
            '1' => Ok(w.child(1)),
            _ => Err(Error::Parse(format!("bad bit {c:?} in word {s:?}"))),
        })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: String = (0..self.len())
            .map(|i| if self.bit(i) == 0 { '0' } else { '1' })
            .collect();
        s.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn order_is_lexicographic_with_prefixes_first() {
        let mut v = [w("1"), w("01"), w(""), w("0"), w("00"), w("011"), w("10")];
        v.sort();
        let shown: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["ε", "0", "00", "01", "011", "1", "10"]);
    }

    #[test]
    fn prefix_ops() {
        assert!(w("").is_prefix_of(&w("0110")));
        assert!(w("01").is_prefix_of(&w("0110")));
        assert!(!w("00").is_prefix_of(&w("0110")));
        assert_eq!(w("0110").strip_prefix(&w("01")), Some(w("10")));
        assert_eq!(w("0110").replace_prefix(&w("01"), &w("1")), Some(w("110")));
        assert_eq!(w("10").sibling(), Some(w("11")));
        assert_eq!(w("10").parent(), Some(w("1")));
        assert_eq!(w("").parent(), None);
    }

    #[test]
    fn long_words() {
        let long = Word::from_bits(&[1; MAX_WORD_LEN]);
        assert_eq!(long.len(), MAX_WORD_LEN);
        assert_eq!(long.strip_prefix(&long), Some(Word::EMPTY));
        assert_eq!(w("1").concat(&long.truncate(127)), long);
        assert!("2".parse::<Word>().is_err());
    }

    #[test]
    fn json_uses_plain_bit_strings() {
        assert_eq!(serde_json::to_string(&w("")).unwrap(), "\"\"");
        assert_eq!(serde_json::from_str::<Word>("\"0101\"").unwrap(), w("0101"));
    }
}
