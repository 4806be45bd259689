//! Hamming neighborhoods of fixed-length motifs.

use std::fmt;

use crate::error::{Error, Result};
use crate::sequence::Alphabet;

/// A fixed-length string of alphabet symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Motif(Vec<u8>);

impl Motif {
    /// Parses and validates a motif against `alphabet`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        match text.bytes().position(|b| !alphabet.contains(b)) {
            None => Ok(Motif(text.as_bytes().to_vec())),
            Some(i) => Err(Error::InvalidSymbol {
                record: text.to_owned(),
                symbol: text[i..].chars().next().unwrap_or('?'),
                offset: i + 1,
            }),
        }
    }

    pub(crate) fn from_bytes(bytes: Vec<u8>) -> Self {
        Motif(bytes)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).unwrap_or_default()
    }

    pub fn reversed(&self) -> Motif {
        Motif(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number of positions at which `a` and `b` differ.
pub fn hamming(a: &Motif, b: &Motif) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// Every motif within `d` substitutions of `generator`.
///
/// Motifs are emitted by increasing substitution count; within one count,
/// substituted positions advance left to right and replacement symbols
/// follow alphabet order. Each motif is emitted exactly once.
pub fn ball(generator: &Motif, d: usize, alphabet: &Alphabet) -> Result<Vec<Motif>> {
    let m = generator.len();
    if d > m {
        return Err(Error::DistanceExceedsLength { d, m });
    }
    if let Some(i) = generator.0.iter().position(|&b| !alphabet.contains(b)) {
        return Err(Error::InvalidSymbol {
            record: generator.to_string(),
            symbol: char::from(generator.0[i]),
            offset: i + 1,
        });
    }

    let mut out = Vec::new();
    let mut work = generator.0.clone();
    for substitutions in 0..=d {
        substitute(&generator.0, &mut work, 0, substitutions, alphabet, &mut out);
    }
    Ok(out)
}

fn substitute(
    original: &[u8],
    work: &mut [u8],
    start: usize,
    remaining: usize,
    alphabet: &Alphabet,
    out: &mut Vec<Motif>,
) {
    if remaining == 0 {
        out.push(Motif(work.to_vec()));
        return;
    }
    // leave room for the other `remaining - 1` positions
    for pos in start..=original.len() - remaining {
        for &sym in alphabet.symbols() {
            if sym == original[pos] {
                continue;
            }
            work[pos] = sym;
            substitute(original, work, pos + 1, remaining - 1, alphabet, out);
        }
        work[pos] = original[pos];
    }
}

/// `sum_{i=0..d} C(m, i) * (sigma - 1)^i`, the size of a Hamming ball.
pub fn ball_size(m: usize, d: usize, sigma: usize) -> Result<u128> {
    if d > m {
        return Err(Error::DistanceExceedsLength { d, m });
    }
    if sigma < 2 {
        return Err(Error::InvalidAlphabet(format!("sigma must be at least 2, got {sigma}")));
    }
    let overflow = || Error::Overflow { m, d, sigma };
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for i in 0..=d {
        if i > 0 {
            binom = binom
                .checked_mul((m - i + 1) as u128)
                .ok_or_else(overflow)?
                / i as u128;
            power = power.checked_mul((sigma - 1) as u128).ok_or_else(overflow)?;
        }
        let term = binom.checked_mul(power).ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}
