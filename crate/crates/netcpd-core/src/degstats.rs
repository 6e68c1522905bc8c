//! Degree extraction and empirical distribution statistics.
//!
//! A window's interactions are collapsed to a simple undirected graph
//! (duplicate pairs and direction collapsed, self-loops dropped); a node's
//! degree is its number of distinct neighbours. Nodes only enter a sample by
//! interacting, so every degree is >= 1 and isolated nodes do not exist from
//! the detector's point of view.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Window;

#[derive(Debug, Error)]
pub enum DegStatsError {
    #[error("window {index} has no usable interactions (only self-loops or empty)")]
    EmptyWindow { index: usize },
}

/// Multiset of node degrees observed in one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSample {
    /// Degrees sorted ascending; every entry is >= 1.
    pub degrees: Vec<u32>,
    /// Number of nodes with at least one neighbour (== `degrees.len()`).
    pub node_count: usize,
}

impl DegreeSample {
    /// Builds a sample from an edge list, collapsing duplicates (in either
    /// direction) and dropping self-loops.
    pub fn from_edges<I>(edges: I) -> DegreeSample
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        let mut degree: HashMap<u32, u32> = HashMap::new();
        for (a, b) in edges {
            if a == b {
                continue;
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if seen.insert(key) {
                *degree.entry(a).or_insert(0) += 1;
                *degree.entry(b).or_insert(0) += 1;
            }
        }
        let mut degrees: Vec<u32> = degree.into_values().collect();
        degrees.sort_unstable();
        let node_count = degrees.len();
        DegreeSample { degrees, node_count }
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

/// Extracts the degree sample of one window.
///
/// Node identifiers are interned per window; windows with no events, or
/// whose events are all self-loops, yield `EmptyWindow`.
pub fn degree_sample(window: &Window) -> Result<DegreeSample, DegStatsError> {
    let mut ids: HashMap<&str, u32> = HashMap::new();
    let mut edges = Vec::with_capacity(window.events.len());
    for event in &window.events {
        if event.source == event.target {
            continue;
        }
        let next = ids.len() as u32;
        let a = *ids.entry(event.source.as_str()).or_insert(next);
        let next = ids.len() as u32;
        let b = *ids.entry(event.target.as_str()).or_insert(next);
        edges.push((a, b));
    }
    let sample = DegreeSample::from_edges(edges);
    if sample.is_empty() {
        return Err(DegStatsError::EmptyWindow { index: window.index });
    }
    Ok(sample)
}

/// Empirical CDF of a degree sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCDF {
    /// Distinct degree values, strictly increasing.
    pub support: Vec<u32>,
    /// `cum[i]` = fraction of degrees <= `support[i]`; strictly increasing,
    /// ending exactly at 1.
    pub cum: Vec<f64>,
}

impl EmpiricalCDF {
    /// Right-continuous step evaluation: fraction of degrees <= `x`.
    pub fn eval(&self, x: u32) -> f64 {
        match self.support.partition_point(|&s| s <= x) {
            0 => 0.0,
            i => self.cum[i - 1],
        }
    }
}

/// Computes the ECDF of a sample.
///
/// Each cumulative value is computed as a single `count / n` division so the
/// result is bit-identical to any other implementation using the same rule.
pub fn ecdf(sample: &DegreeSample) -> EmpiricalCDF {
    let n = sample.degrees.len() as f64;
    let mut support = Vec::new();
    let mut cum = Vec::new();
    let mut seen = 0usize;
    let mut i = 0usize;
    let degrees = &sample.degrees;
    while i < degrees.len() {
        let value = degrees[i];
        let mut j = i;
        while j < degrees.len() && degrees[j] == value {
            j += 1;
        }
        seen += j - i;
        support.push(value);
        cum.push(seen as f64 / n);
        i = j;
    }
    EmpiricalCDF { support, cum }
}

/// Draws `n` degrees without replacement.
///
/// Returns the sample unchanged when it already has `n` or fewer nodes.
/// Deterministic given the generator state; the result is sorted like any
/// other sample.
pub fn subsample<R: Rng>(sample: &DegreeSample, n: usize, rng: &mut R) -> DegreeSample {
    if sample.node_count <= n {
        return sample.clone();
    }
    let picked = rand::seq::index::sample(rng, sample.degrees.len(), n);
    let mut degrees: Vec<u32> = picked.iter().map(|i| sample.degrees[i]).collect();
    degrees.sort_unstable();
    DegreeSample { degrees, node_count: n }
}
