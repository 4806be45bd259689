//! Per-exit string membership bits.

use std::fmt;

use crate::error::{Error, Result};

/// A bit vector of length `n`, one bit per input string. Bits are numbered
/// from 1 (the database string) to `n`; bit 1 is the least significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StringBits {
    n: usize,
    words: Vec<u64>,
}

impl StringBits {
    pub fn new(n: usize) -> Self {
        StringBits {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Panics if `j` is outside `1..=n`.
    pub fn set(&mut self, j: usize) {
        assert!(j >= 1 && j <= self.n, "string index {j} outside 1..={}", self.n);
        self.words[(j - 1) / 64] |= 1 << ((j - 1) % 64);
    }

    pub fn get(&self, j: usize) -> bool {
        j >= 1 && j <= self.n && self.words[(j - 1) / 64] >> ((j - 1) % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn all_set(&self) -> bool {
        self.count_ones() == self.n
    }

    pub fn union_with(&mut self, other: &StringBits) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Big-endian hex, `ceil(n / 4)` digits (at least one).
    pub fn to_hex(&self) -> String {
        let digits = self.n.div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|i| {
                let nibble = self.words.get(i / 16).map_or(0, |w| (w >> ((i % 16) * 4)) & 0xf);
                char::from_digit(nibble as u32, 16).unwrap_or('0')
            })
            .collect()
    }

    /// Parses big-endian hex; any set bit beyond `n` is an error.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut bits = StringBits::new(n);
        if hex.is_empty() {
            return Err(Error::InvalidConfig("empty string bit field".into()));
        }
        for (i, ch) in hex.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::InvalidConfig(format!("bad hex digit '{ch}'")))?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let j = i * 4 + b + 1;
                    if j > n {
                        return Err(Error::InvalidConfig(format!(
                            "bit {j} set but only {n} strings"
                        )));
                    }
                    bits.set(j);
                }
            }
        }
        Ok(bits)
    }
}

impl fmt::Display for StringBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}
