//! Finite binary strings, packed most-significant-bit first.
//!
//! Programs produced by the constructions get long (one bit per stage is
//! typical for an opponent tracking a geometric approximation), so strings
//! are stored 64 bits to a word and compared a word at a time.
//!
//! `Ord` is the lexicographic order in which a proper prefix sorts before
//! its extensions. That order is what the prefix-freeness check relies on:
//! among an antichain, the only candidates comparable with a new string are
//! its immediate neighbours. Length-lexicographic order (the canonical
//! enumeration of strings) is available through [`Bits::length_lex_cmp`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid binary string {0:?}: only '0' and '1' are allowed")]
pub struct BitsParseError(pub String);

/// A finite binary string. Bits past `len` in the last word are always zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
            len: n,
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut b = Self::zeros(n);
        for w in b.words.iter_mut() {
            *w = u64::MAX;
        }
        b.clear_tail();
        b
    }

    /// The code `0^n 1`.
    pub fn unary(n: usize) -> Self {
        let mut b = Self::zeros(n);
        b.push(true);
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (63 - self.len % 64);
        }
        self.len += 1;
    }

    pub fn extend(&mut self, other: &Bits) {
        if self.len % 64 == 0 {
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        for i in 0..other.len {
            self.push(other.get(i));
        }
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn with_bit(&self, bit: bool) -> Bits {
        let mut out = self.clone();
        out.push(bit);
        out
    }

    /// First `n` bits.
    pub fn prefix(&self, n: usize) -> Bits {
        assert!(n <= self.len);
        let mut out = Bits {
            words: self.words[..n.div_ceil(64)].to_vec(),
            len: n,
        };
        out.clear_tail();
        out
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX << (64 - rem);
            }
        }
    }

    /// Whether `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Bits) -> bool {
        if self.len > other.len {
            return false;
        }
        let full = self.len / 64;
        if self.words[..full] != other.words[..full] {
            return false;
        }
        let rem = self.len % 64;
        if rem == 0 {
            return true;
        }
        let mask = u64::MAX << (64 - rem);
        self.words[full] == other.words[full] & mask
    }

    /// Prefix-comparable: one is a prefix of the other.
    pub fn comparable(&self, other: &Bits) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Order by length, then lexicographically.
    pub fn length_lex_cmp(&self, other: &Bits) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.cmp(other))
    }

    /// The `n`-th string in length-lexicographic order (`""`, `"0"`, `"1"`, `"00"`, ...).
    pub fn nth_length_lex(n: u64) -> Bits {
        // Strings of length L occupy ranks 2^L - 1 .. 2^(L+1) - 2.
        let len = (64 - (n + 1).leading_zeros() - 1) as usize;
        let offset = n + 1 - (1u64 << len);
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if offset >> (len - 1 - i) & 1 == 1 {
                b.words[i / 64] |= 1 << (63 - i % 64);
            }
        }
        b
    }

    /// Inverse of [`Bits::nth_length_lex`]; `None` when the rank overflows `u64`.
    pub fn length_lex_rank(&self) -> Option<u64> {
        if self.len >= 63 {
            return None;
        }
        let mut value = 0u64;
        for i in 0..self.len {
            value = value << 1 | self.get(i) as u64;
        }
        Some((1u64 << self.len) - 1 + value)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len);
        let full = common / 64;
        for i in 0..full {
            match self.words[i].cmp(&other.words[i]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        let rem = common % 64;
        if rem != 0 {
            let mask = u64::MAX << (64 - rem);
            match (self.words[full] & mask).cmp(&(other.words[full] & mask)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = Bits::new();
        for bit in iter {
            b.push(bit);
        }
        b
    }
}

impl FromStr for Bits {
    type Err = BitsParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut b = Bits::new();
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => return Err(BitsParseError(s.to_string())),
            }
        }
        Ok(b)
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a literal bit string; panics on bad input. For tests and examples.
pub fn bits(s: &str) -> Bits {
    s.parse().expect("literal bit string")
}
