//! Simulator and toolkit for a systolic forest architecture that finds
//! common approximate substrings (CAS) under a substitution-only error
//! model.
//!
//! The database string is preprocessed into a prefix-shared forest holding
//! every motif within `d` substitutions of one of its windows
//! ([`forest`]). Query strings are then streamed through the forest tick
//! by tick ([`engine`]); exit nodes record which strings came within `d` of
//! their motif, and motifs recorded for every string are verified
//! solutions. [`oracle`] solves the same problem by brute force and
//! [`perf`] sizes a forest in FPGA logic blocks.

pub mod bits;
pub mod cli;
pub mod engine;
pub mod error;
pub mod forest;
pub mod neighborhood;
pub mod oracle;
pub mod perf;
pub mod sequence;

pub use bits::StringBits;
pub use engine::{run_all, CasRecord, CasReport, RunResult, Simulator, StreamToken, TickSchedule};
pub use error::{Error, Result};
pub use forest::{Forest, NodeCounts, Orientation};
pub use neighborhood::{ball, ball_size, hamming, Motif};
pub use oracle::{oracle_cas, oracle_potential, CasInstance};
pub use sequence::{parse_fasta, Alphabet, SearchConfig, Sequence};
