//! Brute-force common approximate substring solver.
//!
//! Deliberately naive and independent of the forest, the engine and the
//! neighborhood enumerator: candidates come from repeated single-symbol
//! substitution of the database windows, and every candidate is checked
//! against every window of every string.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::neighborhood::Motif;
use crate::sequence::{Alphabet, SearchConfig, Sequence};

/// `strings[0]` is the database string.
#[derive(Debug, Clone)]
pub struct CasInstance {
    strings: Vec<Sequence>,
    config: SearchConfig,
}

impl CasInstance {
    pub fn new(strings: Vec<Sequence>, config: SearchConfig) -> Result<Self> {
        if strings.len() != config.n {
            return Err(Error::QueryCountMismatch {
                expected: config.n,
                found: strings.len(),
            });
        }
        if let Some(s) = strings.iter().find(|s| s.len() < config.m) {
            return Err(Error::SequenceTooShort {
                id: s.id().to_owned(),
                len: s.len(),
                m: config.m,
            });
        }
        Ok(CasInstance { strings, config })
    }

    pub fn strings(&self) -> &[Sequence] {
        &self.strings
    }

    pub fn config(&self) -> SearchConfig {
        self.config
    }
}

fn mismatches(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Whether some window of `s` is within `d` substitutions of `motif`.
pub fn oracle_potential(s: &Sequence, motif: &Motif, d: usize) -> bool {
    let m = motif.len();
    s.symbols()
        .windows(m)
        .any(|w| mismatches(w, motif.as_bytes()) <= d)
}

/// All motifs within `d` of some database window and within `d` of some
/// window of every other string, in lexicographic order.
pub fn oracle_cas(instance: &CasInstance, alphabet: &Alphabet) -> Vec<Motif> {
    let SearchConfig { m, d, .. } = instance.config;
    let mut candidates: BTreeSet<Vec<u8>> = instance.strings[0]
        .symbols()
        .windows(m)
        .map(<[u8]>::to_vec)
        .collect();
    let mut frontier = candidates.clone();
    for _ in 0..d {
        let mut grown = BTreeSet::new();
        for motif in &frontier {
            for pos in 0..m {
                for &sym in alphabet.symbols() {
                    let mut next = motif.clone();
                    next[pos] = sym;
                    if !candidates.contains(&next) {
                        grown.insert(next);
                    }
                }
            }
        }
        candidates.extend(grown.iter().cloned());
        frontier = grown;
    }

    candidates
        .into_iter()
        .map(Motif::from_bytes)
        .filter(|motif| {
            instance
                .strings
                .iter()
                .all(|s| oracle_potential(s, motif, d))
        })
        .collect()
}
