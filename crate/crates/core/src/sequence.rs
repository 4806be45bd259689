//! Alphabets, validated sequences, search parameters and FASTA ingestion.
//!
//! Symbols are stored as ASCII bytes. Alphabet symbols are restricted to
//! uppercase letters and digits so that lowercase input can be normalized
//! without ambiguity.

use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::neighborhood::Motif;

/// An ordered set of distinct symbols. Order defines enumeration order
/// everywhere (neighborhood generation, trie child order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let bytes = symbols.as_bytes();
        if bytes.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got '{symbols}'"
            )));
        }
        for (i, &b) in bytes.iter().enumerate() {
            if !(b.is_ascii_uppercase() || b.is_ascii_digit()) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol '{}' is not an uppercase letter or digit",
                    char::from(b)
                )));
            }
            if bytes[..i].contains(&b) {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate symbol '{}'",
                    char::from(b)
                )));
            }
        }
        Ok(Alphabet {
            symbols: bytes.to_vec(),
        })
    }

    /// A, C, G, T.
    pub fn dna() -> Self {
        Alphabet {
            symbols: b"ACGT".to_vec(),
        }
    }

    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.symbols.contains(&symbol)
    }

    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        self.symbols.iter().position(|&s| s == symbol)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::dna()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // symbols are ASCII by construction
        f.write_str(std::str::from_utf8(&self.symbols).unwrap_or_default())
    }
}

/// A labelled string over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    id: String,
    symbols: Vec<u8>,
}

impl Sequence {
    /// Validates `text` against `alphabet`. Lowercase input is normalized
    /// to uppercase; offsets in errors are 1-based.
    pub fn new(id: impl Into<String>, text: &str, alphabet: &Alphabet) -> Result<Self> {
        let id = id.into();
        let mut symbols = Vec::with_capacity(text.len());
        for (i, ch) in text.chars().enumerate() {
            let upper = ch.to_ascii_uppercase();
            if !upper.is_ascii() || !alphabet.contains(upper as u8) {
                return Err(Error::InvalidSymbol {
                    record: id,
                    symbol: ch,
                    offset: i + 1,
                });
            }
            symbols.push(upper as u8);
        }
        Ok(Sequence { id, symbols })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.symbols).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The `l - m + 1` contiguous length-`m` windows, left to right.
    pub fn windows(&self, m: usize) -> Result<Vec<Motif>> {
        if m == 0 {
            return Err(Error::InvalidConfig("motif length must be at least 1".into()));
        }
        if self.len() < m {
            return Err(Error::SequenceTooShort {
                id: self.id.clone(),
                len: self.len(),
                m,
            });
        }
        Ok(self
            .symbols
            .windows(m)
            .map(|w| Motif::from_bytes(w.to_vec()))
            .collect())
    }

    pub(crate) fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match self.symbols.iter().position(|&b| !alphabet.contains(b)) {
            None => Ok(()),
            Some(i) => Err(Error::InvalidSymbol {
                record: self.id.clone(),
                symbol: char::from(self.symbols[i]),
                offset: i + 1,
            }),
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Motif length `m`, substitution budget `d` and string count `n`
/// (database string included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub m: usize,
    pub d: usize,
    pub n: usize,
}

/// Sums travel on an 8-bit channel.
pub const MAX_SUM: usize = 255;

impl SearchConfig {
    pub fn new(m: usize, d: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("motif length m must be at least 1".into()));
        }
        if d > m {
            return Err(Error::DistanceExceedsLength { d, m });
        }
        if n == 0 {
            return Err(Error::InvalidConfig("string count n must be at least 1".into()));
        }
        if m + d + 1 > MAX_SUM {
            return Err(Error::InvalidConfig(format!(
                "m + d + 1 = {} exceeds the 8-bit sum channel ({MAX_SUM})",
                m + d + 1
            )));
        }
        Ok(SearchConfig { m, d, n })
    }
}

/// Parses FASTA records. Header ids are the first whitespace-delimited word;
/// empty headers become `seq<k>` with `k` the 1-based record position.
pub fn parse_fasta<R: BufRead>(reader: R, alphabet: &Alphabet) -> Result<Vec<Sequence>> {
    let mut records: Vec<(String, String)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if let Some(header) = trimmed.strip_prefix('>') {
            let id = header
                .split_whitespace()
                .next()
                .map(str::to_owned)
                .unwrap_or_else(|| format!("seq{}", records.len() + 1));
            records.push((id, String::new()));
        } else if !trimmed.is_empty() {
            let Some((_, data)) = records.last_mut() else {
                return Err(Error::MissingHeader { line: lineno + 1 });
            };
            data.extend(trimmed.chars().filter(|c| !c.is_whitespace()));
        }
    }

    records
        .into_iter()
        .map(|(id, data)| {
            if data.is_empty() {
                Err(Error::EmptyRecord { record: id })
            } else {
                Sequence::new(id, &data, alphabet)
            }
        })
        .collect()
}

pub fn parse_fasta_str(text: &str, alphabet: &Alphabet) -> Result<Vec<Sequence>> {
    parse_fasta(text.as_bytes(), alphabet)
}

/// One header line and one sequence line per record.
pub fn to_fasta(sequences: &[Sequence]) -> String {
    let mut out = String::new();
    for s in sequences {
        out.push('>');
        out.push_str(s.id());
        out.push('\n');
        out.push_str(s.as_str());
        out.push('\n');
    }
    out
}
