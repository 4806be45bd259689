//! Linear CLB and latency model for a forest mapped onto an FPGA.
//!
//! Per-node costs and clocks are measurements from a Spartan-IIE 200
//! implementation. The linear model ignores sharing found at synthesis
//! time and so slightly over-estimates whole-forest figures.

use crate::error::{Error, Result};
use crate::forest::NodeCounts;
use crate::neighborhood::ball_size;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceProfile {
    pub clb_per_processing_node: u64,
    pub clb_per_exit_node: u64,
    pub clock_processing_hz: f64,
    pub clock_exit_hz: f64,
    /// Whole forest with exits clocked at half rate.
    pub clock_divided_hz: f64,
}

impl Default for ResourceProfile {
    fn default() -> Self {
        ResourceProfile {
            clb_per_processing_node: 8,
            clb_per_exit_node: 130,
            clock_processing_hz: 166.639e6,
            clock_exit_hz: 57.991e6,
            clock_divided_hz: 93.032e6,
        }
    }
}

/// Synthesized CLB count for the 21-node, 10-exit forest of motif ACT at d = 1.
pub const MEASURED_ACT_FOREST_CLBS: u64 = 1452;
/// The same forest with a clock divider on the exit nodes.
pub const MEASURED_ACT_FOREST_DIVIDED_CLBS: u64 = 1472;
/// Roughly a 50000-slice Virtex-5.
pub const DEFAULT_DEVICE_CLBS: u64 = 13000;

pub fn estimate_clbs(counts: NodeCounts, profile: &ResourceProfile) -> u64 {
    counts.processing as u64 * profile.clb_per_processing_node
        + counts.exits as u64 * profile.clb_per_exit_node
}

/// `(2l + m) / clock` seconds for one query of length `l`.
pub fn estimate_latency(l: usize, m: usize, clock_hz: f64) -> Result<f64> {
    if m == 0 || l < m {
        return Err(Error::InvalidConfig(format!(
            "latency needs l >= m >= 1, got l={l} m={m}"
        )));
    }
    if !(clock_hz > 0.0) {
        return Err(Error::InvalidConfig(format!("clock must be positive, got {clock_hz}")));
    }
    Ok((2 * l + m) as f64 / clock_hz)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub required_clbs: u64,
    pub device_clbs: u64,
    /// required / available
    pub utilization: f64,
    pub fits: bool,
}

pub fn feasibility(counts: NodeCounts, profile: &ResourceProfile, device_clbs: u64) -> Result<Feasibility> {
    if device_clbs == 0 {
        return Err(Error::InvalidConfig("device CLB count must be positive".into()));
    }
    let required_clbs = estimate_clbs(counts, profile);
    Ok(Feasibility {
        required_clbs,
        device_clbs,
        utilization: required_clbs as f64 / device_clbs as f64,
        fits: required_clbs <= device_clbs,
    })
}

/// Node counts for one generator with no path sharing at all: every leaf
/// gets its own chain of `m` processing nodes.
pub fn unshared_counts(m: usize, d: usize, sigma: usize) -> Result<NodeCounts> {
    let leaves = ball_size(m, d, sigma)?;
    let leaves = usize::try_from(leaves).map_err(|_| Error::Overflow { m, d, sigma })?;
    let processing = leaves.checked_mul(m).ok_or(Error::Overflow { m, d, sigma })?;
    Ok(NodeCounts {
        processing,
        exits: leaves,
    })
}
