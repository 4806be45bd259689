//! The shared motif forest.
//!
//! Every motif within distance `d` of some database window becomes one
//! root-to-leaf path. Paths share identical prefixes (trie sharing) but
//! never leaves: each distinct path ends at its own leaf and exit node.
//! Suffix merging as done in reduced decision diagrams is not performed.

mod format;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use format::{deserialize, serialize};

use crate::bits::StringBits;
use crate::error::{Error, Result};
use crate::neighborhood::{ball, Motif};
use crate::sequence::{Alphabet, SearchConfig, Sequence};

pub type NodeId = usize;
pub type ExitId = usize;

/// Which way a motif is laid out along its root-to-leaf path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    /// The root holds the motif's last symbol. With the streaming dataflow
    /// of the engine this makes an exit fire exactly when some query window
    /// is within `d` of the exit's motif.
    #[default]
    MotifReversed,
    /// The root holds the motif's first symbol. The exit then fires on
    /// windows within `d` of the *reversed* motif.
    PaperLiteral,
}

impl Orientation {
    pub fn path_of(self, motif: &Motif) -> Vec<u8> {
        match self {
            Orientation::MotifReversed => motif.as_bytes().iter().rev().copied().collect(),
            Orientation::PaperLiteral => motif.as_bytes().to_vec(),
        }
    }

    pub fn motif_of(self, path: &[u8]) -> Motif {
        match self {
            Orientation::MotifReversed => Motif::from_bytes(path.iter().rev().copied().collect()),
            Orientation::PaperLiteral => Motif::from_bytes(path.to_vec()),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::MotifReversed => "motif-reversed",
            Orientation::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "motif-reversed" => Ok(Orientation::MotifReversed),
            "paper-literal" => Ok(Orientation::PaperLiteral),
            other => Err(Error::InvalidConfig(format!("unknown orientation '{other}'"))),
        }
    }
}

/// A processing node. Levels run from 1 (roots) to `m` (leaves).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestNode {
    pub id: NodeId,
    pub level: usize,
    pub symbol: u8,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub exit: Option<ExitId>,
}

/// The node below a leaf that compares incoming sums against `d` and
/// records which strings found its motif.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitNode {
    pub id: ExitId,
    pub leaf: NodeId,
    /// Database orientation regardless of how the path is laid out.
    pub motif: Motif,
    pub d: usize,
    pub string_bits: StringBits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeCounts {
    pub processing: usize,
    pub exits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    config: SearchConfig,
    alphabet: Alphabet,
    orientation: Orientation,
    roots: Vec<NodeId>,
    nodes: Vec<ForestNode>,
    exits: Vec<ExitNode>,
}

impl Forest {
    /// Preprocesses the database string: the union of the radius-`d` balls
    /// of all its windows, laid out as a prefix-shared trie. Bit 1 of every
    /// exit is preset since the database string is within `d` of each
    /// motif generated from it.
    pub fn build(
        db: &Sequence,
        config: SearchConfig,
        alphabet: &Alphabet,
        orientation: Orientation,
    ) -> Result<Forest> {
        db.check_alphabet(alphabet)?;
        let windows = db.windows(config.m)?;

        let mut seen_windows = HashSet::new();
        let mut seen = HashSet::new();
        let mut entries = Vec::new();
        for w in windows {
            if !seen_windows.insert(w.clone()) {
                continue;
            }
            for motif in ball(&w, config.d, alphabet)? {
                if seen.insert(motif.clone()) {
                    let mut bits = StringBits::new(config.n);
                    bits.set(1);
                    entries.push(PathEntry {
                        path: orientation.path_of(&motif),
                        motif,
                        bits,
                    });
                }
            }
        }
        Ok(Forest::from_paths(config, alphabet.clone(), orientation, entries))
    }

    /// Lays out distinct, equal-length paths as a trie with breadth-first
    /// ids; children are ordered by alphabet position.
    fn from_paths(
        config: SearchConfig,
        alphabet: Alphabet,
        orientation: Orientation,
        entries: Vec<PathEntry>,
    ) -> Forest {
        struct Draft {
            symbol: u8,
            children: Vec<usize>,
            entry: Option<usize>,
        }

        // slot 0 is a virtual super-root
        let mut drafts = vec![Draft {
            symbol: 0,
            children: Vec::new(),
            entry: None,
        }];
        for (e, entry) in entries.iter().enumerate() {
            let mut at = 0;
            for &sym in &entry.path {
                let existing = drafts[at]
                    .children
                    .iter()
                    .copied()
                    .find(|&c| drafts[c].symbol == sym);
                at = match existing {
                    Some(c) => c,
                    None => {
                        drafts.push(Draft {
                            symbol: sym,
                            children: Vec::new(),
                            entry: None,
                        });
                        let c = drafts.len() - 1;
                        drafts[at].children.push(c);
                        c
                    }
                };
            }
            debug_assert!(drafts[at].entry.is_none(), "duplicate path");
            drafts[at].entry = Some(e);
        }
        let rank = |sym: u8| alphabet.index_of(sym).unwrap_or(usize::MAX);
        for i in 0..drafts.len() {
            let mut children = std::mem::take(&mut drafts[i].children);
            children.sort_by_key(|&c| rank(drafts[c].symbol));
            drafts[i].children = children;
        }

        let mut entries: Vec<Option<PathEntry>> = entries.into_iter().map(Some).collect();
        let mut nodes: Vec<ForestNode> = Vec::with_capacity(drafts.len() - 1);
        let mut exits = Vec::new();
        // (draft index, parent id, level)
        let mut queue = std::collections::VecDeque::new();
        for &c in &drafts[0].children {
            queue.push_back((c, None, 1));
        }
        while let Some((draft, parent, level)) = queue.pop_front() {
            let id = nodes.len();
            let exit = drafts[draft].entry.map(|e| {
                let entry = entries[e].take().expect("each path has one leaf");
                exits.push(ExitNode {
                    id: exits.len(),
                    leaf: id,
                    motif: entry.motif,
                    d: config.d,
                    string_bits: entry.bits,
                });
                exits.len() - 1
            });
            nodes.push(ForestNode {
                id,
                level,
                symbol: drafts[draft].symbol,
                parent,
                children: Vec::new(),
                exit,
            });
            if let Some(p) = parent {
                nodes[p].children.push(id);
            }
            for &c in &drafts[draft].children {
                queue.push_back((c, Some(id), level + 1));
            }
        }
        let roots = nodes
            .iter()
            .take_while(|n| n.level == 1)
            .map(|n| n.id)
            .collect();

        Forest {
            config,
            alphabet,
            orientation,
            roots,
            nodes,
            exits,
        }
    }

    pub fn config(&self) -> SearchConfig {
        self.config
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &ForestNode {
        &self.nodes[id]
    }

    pub fn exits(&self) -> &[ExitNode] {
        &self.exits
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_counts(&self) -> NodeCounts {
        NodeCounts {
            processing: self.nodes.len(),
            exits: self.exits.len(),
        }
    }

    /// Symbols from the root down to `node`.
    pub fn path_to(&self, node: NodeId) -> Vec<u8> {
        let mut path = Vec::with_capacity(self.nodes[node].level);
        let mut at = Some(node);
        while let Some(id) = at {
            path.push(self.nodes[id].symbol);
            at = self.nodes[id].parent;
        }
        path.reverse();
        path
    }

    pub fn exit_motifs(&self) -> impl Iterator<Item = &Motif> {
        self.exits.iter().map(|e| &e.motif)
    }
}

struct PathEntry {
    path: Vec<u8>,
    motif: Motif,
    bits: StringBits,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn build(db: &str, m: usize, d: usize, orientation: Orientation) -> Forest {
        let alphabet = Alphabet::dna();
        let db = Sequence::new("db", db, &alphabet).unwrap();
        Forest::build(&db, SearchConfig::new(m, d, 1).unwrap(), &alphabet, orientation).unwrap()
    }

    #[test]
    fn act_radius_one_counts() {
        for o in [Orientation::PaperLiteral, Orientation::MotifReversed] {
            let f = build("ACT", 3, 1, o);
            assert_eq!(
                f.node_counts(),
                NodeCounts {
                    processing: 21,
                    exits: 10
                }
            );
            assert_eq!(f.roots().len(), 4);
        }
    }

    #[test]
    fn radius_zero_is_a_single_path() {
        for o in [Orientation::PaperLiteral, Orientation::MotifReversed] {
            let f = build("ACT", 3, 0, o);
            assert_eq!(f.node_counts(), NodeCounts { processing: 3, exits: 1 });
        }
        let f = build("ACT", 3, 0, Orientation::MotifReversed);
        assert_eq!(f.path_to(2), b"TCA");
        assert_eq!(f.exits()[0].motif.as_str(), "ACT");
    }

    #[test]
    fn act_ctt_union_shares_two_motifs() {
        let f = build("ACTT", 3, 1, Orientation::PaperLiteral);
        assert_eq!(f.node_counts().exits, 18);
        assert_eq!(f.node_counts().processing, 34);
    }

    #[test]
    fn paths_match_orientation() {
        for o in [Orientation::PaperLiteral, Orientation::MotifReversed] {
            let f = build("GATTACA", 4, 1, o);
            for e in f.exits() {
                assert_eq!(o.motif_of(&f.path_to(e.leaf)), e.motif);
                assert!(e.string_bits.get(1));
            }
        }
    }

    #[test]
    fn ids_are_breadth_first_and_children_ordered() {
        let f = build("ACTGA", 3, 1, Orientation::MotifReversed);
        let alphabet = Alphabet::dna();
        for (i, n) in f.nodes().iter().enumerate() {
            assert_eq!(n.id, i);
            if i > 0 {
                assert!(f.nodes()[i - 1].level <= n.level);
            }
            let ranks: Vec<_> = n
                .children
                .iter()
                .map(|&c| alphabet.index_of(f.node(c).symbol).unwrap())
                .collect();
            assert!(ranks.windows(2).all(|w| w[0] < w[1]));
            for &c in &n.children {
                assert_eq!(f.node(c).level, n.level + 1);
                assert_eq!(f.node(c).parent, Some(i));
            }
            assert_eq!(n.exit.is_some(), n.level == 3);
            assert_eq!(n.children.is_empty(), n.level == 3);
        }
        let leaf_order: Vec<_> = f.exits().iter().map(|e| e.leaf).collect();
        assert!(leaf_order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn duplicate_windows_do_not_duplicate_exits() {
        let f = build("AAAAAA", 3, 0, Orientation::MotifReversed);
        assert_eq!(f.node_counts(), NodeCounts { processing: 3, exits: 1 });
        let motifs: BTreeSet<_> = build("ACGACG", 3, 0, Orientation::PaperLiteral)
            .exit_motifs()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(motifs, BTreeSet::from(["ACG".into(), "CGA".into(), "GAC".into()]));
    }

    #[test]
    fn too_short_database_is_rejected() {
        let alphabet = Alphabet::dna();
        let db = Sequence::new("db", "AC", &alphabet).unwrap();
        let err = Forest::build(
            &db,
            SearchConfig::new(3, 0, 1).unwrap(),
            &alphabet,
            Orientation::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SequenceTooShort { .. }));
    }

    #[test]
    fn orientation_parses() {
        assert_eq!("paper-literal".parse::<Orientation>().unwrap(), Orientation::PaperLiteral);
        assert_eq!(
            "motif-reversed".parse::<Orientation>().unwrap(),
            Orientation::MotifReversed
        );
        assert!("forward".parse::<Orientation>().is_err());
    }
}
