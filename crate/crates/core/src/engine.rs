//! Cycle-accurate simulation of a forest as a synchronous systolic array.
//!
//! Each tick every processing node receives the token its parent held
//! before the tick (roots receive the injected token) and then:
//!
//! - `Character(c)`: shifts `c != symbol` into the right end of its
//!   level-length bit vector, dropping the leftmost bit, and keeps `c`;
//! - `Number(v)`: keeps `v` plus the leftmost bit of its bit vector;
//! - `Blank`: keeps `Blank`.
//!
//! Exit nodes read their leaf's pre-tick token and flag the current string
//! when that token is a number no greater than `d`.
//!
//! A query of length `l` is streamed as `l` character/number pairs followed
//! by `m` blanks, `2l + m` ticks in total. The first `m - 1` numbers carry
//! `d + 1` so sums for incomplete windows can never reach an exit below `d`.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::bits::StringBits;
use crate::error::{Error, Result};
use crate::forest::{ExitId, Forest, NodeId};
use crate::neighborhood::Motif;
use crate::sequence::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamToken {
    Character(u8),
    Number(u8),
    Blank,
}

impl fmt::Display for StreamToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamToken::Character(c) => write!(f, "C:{}", char::from(*c)),
            StreamToken::Number(v) => write!(f, "N:{v}"),
            StreamToken::Blank => f.write_str("B"),
        }
    }
}

/// Input stream for one query string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TickSchedule {
    pub l: usize,
    pub m: usize,
    pub d: usize,
}

impl TickSchedule {
    pub fn new(l: usize, m: usize, d: usize) -> Self {
        TickSchedule { l, m, d }
    }

    pub fn total_ticks(&self) -> usize {
        2 * self.l + self.m
    }

    /// Number injected after character `k` (0-based).
    pub fn number(&self, k: usize) -> u8 {
        if k + 2 <= self.m {
            (self.d + 1) as u8
        } else {
            0
        }
    }

    /// Token injected at `tick` (1-based).
    pub fn token(&self, tick: usize, query: &[u8]) -> StreamToken {
        debug_assert!(tick >= 1 && tick <= self.total_ticks());
        if tick > 2 * self.l {
            StreamToken::Blank
        } else if tick % 2 == 1 {
            StreamToken::Character(query[(tick - 1) / 2])
        } else {
            StreamToken::Number(self.number(tick / 2 - 1))
        }
    }
}

/// Outcome of streaming one query string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub string_index: usize,
    /// Indexed by exit id.
    pub potential: Vec<bool>,
    pub ticks: usize,
}

impl RunResult {
    pub fn potential_exits(&self) -> impl Iterator<Item = ExitId> + '_ {
        self.potential
            .iter()
            .enumerate()
            .filter_map(|(e, &p)| p.then_some(e))
    }
}

const NO_PARENT: usize = usize::MAX;

/// Mutable array state over a read-only forest. Bit vectors are ring
/// buffers packed into one allocation.
pub struct Simulator<'f> {
    forest: &'f Forest,
    parent: Vec<usize>,
    symbol: Vec<u8>,
    offset: Vec<usize>,
    head: Vec<usize>,
    bits: Vec<bool>,
    slots: Vec<StreamToken>,
    next: Vec<StreamToken>,
    exit_leaf: Vec<NodeId>,
    exit_in: Vec<StreamToken>,
    potential: Vec<bool>,
    d: u8,
    ticks: usize,
}

impl<'f> Simulator<'f> {
    /// All bit vectors start cleared and all slots blank.
    pub fn new(forest: &'f Forest) -> Self {
        let nodes = forest.nodes();
        let mut offset = Vec::with_capacity(nodes.len());
        let mut total = 0;
        for n in nodes {
            offset.push(total);
            total += n.level;
        }
        Simulator {
            forest,
            parent: nodes.iter().map(|n| n.parent.unwrap_or(NO_PARENT)).collect(),
            symbol: nodes.iter().map(|n| n.symbol).collect(),
            offset,
            head: vec![0; nodes.len()],
            bits: vec![false; total],
            slots: vec![StreamToken::Blank; nodes.len()],
            next: vec![StreamToken::Blank; nodes.len()],
            exit_leaf: forest.exits().iter().map(|e| e.leaf).collect(),
            exit_in: vec![StreamToken::Blank; forest.exits().len()],
            potential: vec![false; forest.exits().len()],
            d: forest.config().d as u8,
            ticks: 0,
        }
    }

    pub fn forest(&self) -> &'f Forest {
        self.forest
    }

    /// Overwrites every bit vector; `f(node, position)` with position 0 the
    /// leftmost bit.
    pub fn fill_bit_vectors(&mut self, mut f: impl FnMut(NodeId, usize) -> bool) {
        for (id, node) in self.forest.nodes().iter().enumerate() {
            self.head[id] = 0;
            for pos in 0..node.level {
                self.bits[self.offset[id] + pos] = f(id, pos);
            }
        }
    }

    /// Leftmost bit first.
    pub fn bit_vector(&self, node: NodeId) -> Vec<bool> {
        let len = self.forest.node(node).level;
        (0..len)
            .map(|i| self.bits[self.offset[node] + (self.head[node] + i) % len])
            .collect()
    }

    pub fn slot(&self, node: NodeId) -> StreamToken {
        self.slots[node]
    }

    /// The token exit `exit` received on the most recent tick.
    pub fn exit_input(&self, exit: ExitId) -> StreamToken {
        self.exit_in[exit]
    }

    pub fn is_potential(&self, exit: ExitId) -> bool {
        self.potential[exit]
    }

    /// Ticks since the current string started.
    pub fn ticks_elapsed(&self) -> usize {
        self.ticks
    }

    /// Clears slots and exit flags; bit vectors are left as they are.
    pub fn begin_string(&mut self) {
        self.slots.fill(StreamToken::Blank);
        self.exit_in.fill(StreamToken::Blank);
        self.potential.fill(false);
        self.ticks = 0;
    }

    /// One synchronous clock edge.
    pub fn tick(&mut self, injected: StreamToken) {
        for i in 0..self.slots.len() {
            let incoming = match self.parent[i] {
                NO_PARENT => injected,
                p => self.slots[p],
            };
            self.next[i] = match incoming {
                StreamToken::Character(c) => {
                    let len = self.forest.nodes()[i].level;
                    let head = self.head[i];
                    // overwrite the leftmost bit, which becomes the new rightmost
                    self.bits[self.offset[i] + head] = c != self.symbol[i];
                    self.head[i] = (head + 1) % len;
                    incoming
                }
                StreamToken::Number(v) => {
                    let leftmost = self.bits[self.offset[i] + self.head[i]];
                    StreamToken::Number(v.saturating_add(leftmost as u8))
                }
                StreamToken::Blank => StreamToken::Blank,
            };
        }
        for (e, &leaf) in self.exit_leaf.iter().enumerate() {
            let incoming = self.slots[leaf];
            self.exit_in[e] = incoming;
            if matches!(incoming, StreamToken::Number(s) if s <= self.d) {
                self.potential[e] = true;
            }
        }
        std::mem::swap(&mut self.slots, &mut self.next);
        self.ticks += 1;
    }

    fn check_query(&self, query: &Sequence) -> Result<TickSchedule> {
        let config = self.forest.config();
        if query.len() < config.m {
            return Err(Error::SequenceTooShort {
                id: query.id().to_owned(),
                len: query.len(),
                m: config.m,
            });
        }
        query.check_alphabet(self.forest.alphabet())?;
        Ok(TickSchedule::new(query.len(), config.m, config.d))
    }

    /// Streams `query` as string number `j` (1-based, at most `n`).
    pub fn run_string(&mut self, query: &Sequence, j: usize) -> Result<RunResult> {
        let n = self.forest.config().n;
        if j == 0 || j > n {
            return Err(Error::StringIndex { index: j, n });
        }
        let schedule = self.check_query(query)?;
        self.begin_string();
        for t in 1..=schedule.total_ticks() {
            self.tick(schedule.token(t, query.symbols()));
        }
        Ok(RunResult {
            string_index: j,
            potential: self.potential.clone(),
            ticks: self.ticks,
        })
    }

    /// Streams `query` while writing a per-tick dump of every processing
    /// node. Returns the number of ticks run.
    pub fn trace(&mut self, query: &Sequence, sink: &mut dyn Write) -> Result<usize> {
        let schedule = self.check_query(query)?;
        writeln!(sink, "TICKS {}", schedule.total_ticks())?;
        self.begin_string();
        let mut line = String::new();
        for t in 1..=schedule.total_ticks() {
            let token = schedule.token(t, query.symbols());
            self.tick(token);
            if self.slots.is_empty() {
                continue;
            }
            writeln!(sink, "T {t} IN {token}")?;
            for id in 0..self.slots.len() {
                line.clear();
                line.extend(self.bit_vector(id).iter().map(|&b| if b { '1' } else { '0' }));
                writeln!(sink, "S {id} {line} {}", self.slots[id])?;
            }
        }
        Ok(self.ticks)
    }
}

/// Streams `query` through a freshly cleared array and writes its trace.
pub fn trace(forest: &Forest, query: &Sequence, sink: &mut dyn Write) -> Result<usize> {
    Simulator::new(forest).trace(query, sink)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasRecord {
    pub exit: ExitId,
    pub motif: Motif,
    pub string_bits: StringBits,
    pub verified: bool,
}

impl CasRecord {
    pub fn potential_count(&self) -> usize {
        self.string_bits.count_ones()
    }
}

/// Per-exit string bits after all strings have been streamed. Records are
/// in exit-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasReport {
    pub n: usize,
    pub records: Vec<CasRecord>,
}

impl CasReport {
    /// ORs each run into the forest's stored string bits.
    pub fn from_runs<'a>(
        forest: &Forest,
        runs: impl IntoIterator<Item = &'a RunResult>,
    ) -> Result<CasReport> {
        let n = forest.config().n;
        let mut bits: Vec<StringBits> = forest.exits().iter().map(|e| e.string_bits.clone()).collect();
        for run in runs {
            if run.string_index == 0 || run.string_index > n {
                return Err(Error::StringIndex {
                    index: run.string_index,
                    n,
                });
            }
            if run.potential.len() != bits.len() {
                return Err(Error::LengthMismatch {
                    left: run.potential.len(),
                    right: bits.len(),
                });
            }
            for e in run.potential_exits() {
                bits[e].set(run.string_index);
            }
        }
        let records = forest
            .exits()
            .iter()
            .zip(bits)
            .map(|(exit, string_bits)| CasRecord {
                exit: exit.id,
                motif: exit.motif.clone(),
                verified: string_bits.all_set(),
                string_bits,
            })
            .collect();
        Ok(CasReport { n, records })
    }

    /// Verified motifs in lexicographic order.
    pub fn verified_motifs(&self) -> Vec<Motif> {
        let mut out: Vec<Motif> = self
            .records
            .iter()
            .filter(|r| r.verified)
            .map(|r| r.motif.clone())
            .collect();
        out.sort();
        out
    }

    pub fn verified_count(&self) -> usize {
        self.records.iter().filter(|r| r.verified).count()
    }
}

/// Streams strings `2..=n` (`queries[0]` is string 2) and merges the
/// results. Strings run concurrently, each on a private array.
pub fn run_all(forest: &Forest, queries: &[Sequence]) -> Result<CasReport> {
    let expected = forest.config().n - 1;
    if queries.len() != expected {
        return Err(Error::QueryCountMismatch {
            expected,
            found: queries.len(),
        });
    }
    let runs = queries
        .par_iter()
        .enumerate()
        .map(|(i, q)| Simulator::new(forest).run_string(q, i + 2))
        .collect::<Result<Vec<_>>>()?;
    CasReport::from_runs(forest, &runs)
}
