//! CAF1: line-oriented text serialization of a forest.
//!
//! ```text
//! CAF1 m=<m> d=<d> n=<n> alphabet=<symbols> orientation=<motif-reversed|paper-literal>
//! N <id> <level> <symbol> <parent-id|->
//! X <id> <leaf-node-id> <motif> <string bits, big-endian hex>
//! ```
//!
//! Node lines precede exit lines. Blank lines and text after `#` are
//! ignored. Ids in a file may be arbitrary unique integers; loading
//! renumbers them into canonical breadth-first order.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::{Forest, Orientation, PathEntry};
use crate::bits::StringBits;
use crate::error::{Error, Result};
use crate::neighborhood::Motif;
use crate::sequence::{Alphabet, SearchConfig};

const MAGIC: &str = "CAF1";

pub fn serialize(forest: &Forest) -> String {
    let c = forest.config();
    let mut out = format!(
        "{MAGIC} m={} d={} n={} alphabet={} orientation={}\n",
        c.m,
        c.d,
        c.n,
        forest.alphabet(),
        forest.orientation()
    );
    for node in forest.nodes() {
        let parent = node.parent.map_or_else(|| "-".to_owned(), |p| p.to_string());
        let _ = writeln!(
            out,
            "N {} {} {} {}",
            node.id,
            node.level,
            char::from(node.symbol),
            parent
        );
    }
    for exit in forest.exits() {
        let _ = writeln!(
            out,
            "X {} {} {} {}",
            exit.id, exit.leaf, exit.motif, exit.string_bits
        );
    }
    out
}

struct RawNode {
    line: usize,
    id: u64,
    level: usize,
    symbol: u8,
    parent: Option<u64>,
}

struct RawExit {
    line: usize,
    leaf: u64,
    motif: String,
    bits: String,
}

struct Header {
    config: SearchConfig,
    alphabet: Alphabet,
    orientation: Orientation,
}

pub fn deserialize(text: &str) -> Result<Forest> {
    let mut header: Option<Header> = None;
    let mut nodes: Vec<RawNode> = Vec::new();
    let mut exits: Vec<RawExit> = Vec::new();
    let mut node_index: HashMap<u64, usize> = HashMap::new();
    let mut exit_ids: HashSet<u64> = HashSet::new();

    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();

        let Some(h) = &header else {
            header = Some(parse_header(line, &fields)?);
            continue;
        };
        match fields[0] {
            "N" => {
                if !exits.is_empty() {
                    return Err(Error::malformed(line, "node line after exit lines"));
                }
                let node = parse_node(line, &fields, h)?;
                if node_index.insert(node.id, nodes.len()).is_some() {
                    return Err(Error::malformed(line, format!("duplicate node id {}", node.id)));
                }
                nodes.push(node);
            }
            "X" => {
                if fields.len() != 5 {
                    return Err(Error::malformed(line, "exit line needs 4 fields"));
                }
                let id = parse_int(line, fields[1], "exit id")?;
                if !exit_ids.insert(id) {
                    return Err(Error::malformed(line, format!("duplicate exit id {id}")));
                }
                exits.push(RawExit {
                    line,
                    leaf: parse_int(line, fields[2], "leaf id")?,
                    motif: fields[3].to_owned(),
                    bits: fields[4].to_owned(),
                });
            }
            other => {
                return Err(Error::malformed(line, format!("unknown record type '{other}'")));
            }
        }
    }

    let Some(header) = header else {
        return Err(Error::malformed(0, "missing CAF1 header"));
    };
    let m = header.config.m;

    // parents, levels and sibling uniqueness
    let mut parent_of: Vec<Option<usize>> = Vec::with_capacity(nodes.len());
    let mut sibling_symbols: HashSet<(Option<usize>, u8)> = HashSet::new();
    let mut has_child = vec![false; nodes.len()];
    for node in &nodes {
        let parent = match node.parent {
            None => {
                if node.level != 1 {
                    return Err(Error::malformed(
                        node.line,
                        format!("root node {} must be at level 1", node.id),
                    ));
                }
                None
            }
            Some(pid) => {
                let &p = node_index.get(&pid).ok_or(Error::DanglingId {
                    line: node.line,
                    id: pid,
                })?;
                if nodes[p].level + 1 != node.level {
                    return Err(Error::malformed(
                        node.line,
                        format!(
                            "node {} at level {} under parent at level {}",
                            node.id, node.level, nodes[p].level
                        ),
                    ));
                }
                has_child[p] = true;
                Some(p)
            }
        };
        if !sibling_symbols.insert((parent, node.symbol)) {
            return Err(Error::DuplicateSibling {
                line: node.line,
                parent: node.parent.map_or_else(|| "-".to_owned(), |p| p.to_string()),
                symbol: char::from(node.symbol),
            });
        }
        parent_of.push(parent);
    }

    let mut leaf_exit: Vec<bool> = vec![false; nodes.len()];
    let mut entries = Vec::with_capacity(exits.len());
    for exit in &exits {
        let &leaf = node_index.get(&exit.leaf).ok_or(Error::DanglingId {
            line: exit.line,
            id: exit.leaf,
        })?;
        if nodes[leaf].level != m {
            return Err(Error::malformed(
                exit.line,
                format!("exit attached to node {} at level {} < {m}", exit.leaf, nodes[leaf].level),
            ));
        }
        if std::mem::replace(&mut leaf_exit[leaf], true) {
            return Err(Error::malformed(
                exit.line,
                format!("leaf {} has more than one exit", exit.leaf),
            ));
        }
        let motif = Motif::parse(&exit.motif, &header.alphabet)
            .map_err(|e| Error::malformed(exit.line, e.to_string()))?;
        let mut path = Vec::with_capacity(m);
        let mut at = Some(leaf);
        while let Some(i) = at {
            path.push(nodes[i].symbol);
            at = parent_of[i];
        }
        path.reverse();
        if header.orientation.path_of(&motif) != path {
            return Err(Error::malformed(
                exit.line,
                format!(
                    "motif {motif} does not match path {} in {} orientation",
                    String::from_utf8_lossy(&path),
                    header.orientation
                ),
            ));
        }
        let bits = StringBits::from_hex(header.config.n, &exit.bits)
            .map_err(|e| Error::malformed(exit.line, e.to_string()))?;
        entries.push(PathEntry { path, motif, bits });
    }

    for (i, node) in nodes.iter().enumerate() {
        if node.level < m && !has_child[i] {
            return Err(Error::malformed(
                node.line,
                format!("node {} ends above level {m}", node.id),
            ));
        }
        if node.level == m && !leaf_exit[i] {
            return Err(Error::malformed(node.line, format!("leaf {} has no exit", node.id)));
        }
    }

    Ok(Forest::from_paths(
        header.config,
        header.alphabet,
        header.orientation,
        entries,
    ))
}

fn parse_header(line: usize, fields: &[&str]) -> Result<Header> {
    if fields[0] != MAGIC {
        return Err(Error::VersionMismatch {
            line,
            found: fields[0].to_owned(),
        });
    }
    let mut values: HashMap<&str, &str> = HashMap::new();
    for field in &fields[1..] {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::malformed(line, format!("expected key=value, got '{field}'")))?;
        if !matches!(key, "m" | "d" | "n" | "alphabet" | "orientation") {
            return Err(Error::malformed(line, format!("unknown header key '{key}'")));
        }
        if values.insert(key, value).is_some() {
            return Err(Error::malformed(line, format!("repeated header key '{key}'")));
        }
    }
    let get = |key: &str| {
        values
            .get(key)
            .copied()
            .ok_or_else(|| Error::malformed(line, format!("header is missing '{key}'")))
    };
    let config = SearchConfig::new(
        parse_int(line, get("m")?, "m")?,
        parse_int(line, get("d")?, "d")?,
        parse_int(line, get("n")?, "n")?,
    )
    .map_err(|e| Error::malformed(line, e.to_string()))?;
    let alphabet = Alphabet::new(get("alphabet")?).map_err(|e| Error::malformed(line, e.to_string()))?;
    let orientation = get("orientation")?
        .parse()
        .map_err(|e: Error| Error::malformed(line, e.to_string()))?;
    Ok(Header {
        config,
        alphabet,
        orientation,
    })
}

fn parse_node(line: usize, fields: &[&str], header: &Header) -> Result<RawNode> {
    if fields.len() != 5 {
        return Err(Error::malformed(line, "node line needs 4 fields"));
    }
    let id = parse_int(line, fields[1], "node id")?;
    let level: usize = parse_int(line, fields[2], "level")?;
    if level == 0 || level > header.config.m {
        return Err(Error::malformed(
            line,
            format!("level {level} outside 1..={}", header.config.m),
        ));
    }
    let symbol = match fields[3].as_bytes() {
        [b] if header.alphabet.contains(*b) => *b,
        _ => {
            return Err(Error::malformed(
                line,
                format!("symbol '{}' is not in alphabet {}", fields[3], header.alphabet),
            ))
        }
    };
    let parent = match fields[4] {
        "-" => None,
        p => Some(parse_int(line, p, "parent id")?),
    };
    Ok(RawNode {
        line,
        id,
        level,
        symbol,
        parent,
    })
}

fn parse_int<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<T> {
    text.parse()
        .map_err(|_| Error::malformed(line, format!("invalid {what} '{text}'")))
}
