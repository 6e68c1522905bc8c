//! Synthetic network generators and alternating change scenarios.
//!
//! Two models: Erdős–Rényi `G(n, p)` and the connected caveman model (a
//! ring of cliques) with per-edge rewiring. A scenario alternates between
//! two model configurations, producing a snapshot sequence with a known
//! change schedule for benchmarking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degstats::DegreeSample;
use crate::derive_seed;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
}

/// Node-count distribution for generated snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SizeDist {
    Fixed(usize),
    /// `var` is the literal variance (std = sqrt(var)).
    Normal { mean: f64, var: f64 },
    /// Inclusive bounds.
    Uniform { lo: usize, hi: usize },
}

impl SizeDist {
    fn validate(&self) -> Result<(), SynthError> {
        match *self {
            SizeDist::Fixed(n) if n < 2 => {
                Err(SynthError::InvalidConfig(format!("fixed size must be >= 2, got {n}")))
            }
            SizeDist::Normal { var, .. } if var < 0.0 => {
                Err(SynthError::InvalidConfig(format!("size variance must be >= 0, got {var}")))
            }
            SizeDist::Uniform { lo, hi } if lo > hi => {
                Err(SynthError::InvalidConfig(format!("uniform size bounds inverted: [{lo}, {hi}]")))
            }
            _ => Ok(()),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        match *self {
            SizeDist::Fixed(n) => n,
            SizeDist::Normal { mean, var } => {
                let normal = Normal::new(mean, var.sqrt()).expect("validated params");
                normal.sample(rng).round().max(0.0) as usize
            }
            SizeDist::Uniform { lo, hi } => rng.gen_range(lo..=hi),
        }
    }
}

/// Which generator a configuration uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Er,
    Caveman,
}

/// One generative configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub n: SizeDist,
    /// ER: edge probability. Caveman: rewiring probability.
    pub p: f64,
    /// Number of cliques (caveman only; >= 1).
    pub communities: usize,
}

impl ModelConfig {
    pub fn er(n: SizeDist, p: f64) -> Self {
        ModelConfig { kind: ModelKind::Er, n, p, communities: 1 }
    }

    pub fn caveman(n: SizeDist, communities: usize, p_rewire: f64) -> Self {
        ModelConfig { kind: ModelKind::Caveman, n, p: p_rewire, communities }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        self.n.validate()?;
        if !(0.0..=1.0).contains(&self.p) {
            return Err(SynthError::InvalidConfig(format!("p must lie in [0, 1], got {}", self.p)));
        }
        if self.kind == ModelKind::Caveman && self.communities < 1 {
            return Err(SynthError::InvalidConfig("caveman needs communities >= 1".into()));
        }
        Ok(())
    }

    /// Smallest node count this configuration can generate.
    fn min_nodes(&self) -> usize {
        match self.kind {
            ModelKind::Er => 2,
            ModelKind::Caveman => 2 * self.communities,
        }
    }

    fn generate<R: Rng>(&self, n: usize, rng: &mut R) -> Result<(DegreeSample, Vec<(u32, u32)>), SynthError> {
        match self.kind {
            ModelKind::Er => gen_er(n, self.p, rng),
            ModelKind::Caveman => gen_caveman(n, self.communities, self.p, rng),
        }
    }
}

/// Erdős–Rényi `G(n, p)` sample.
///
/// Uses geometric skip-sampling over the `n(n−1)/2` pair slots, so the cost
/// is proportional to the number of edges rather than pairs. Returns the
/// degree sample (isolated nodes excluded — interaction data never shows
/// them) and the edge list.
pub fn gen_er<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<(DegreeSample, Vec<(u32, u32)>), SynthError> {
    if n < 2 {
        return Err(SynthError::InvalidConfig(format!("ER needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(SynthError::InvalidConfig(format!("p must lie in [0, 1], got {p}")));
    }
    let mut edges: Vec<(u32, u32)> = Vec::new();
    if p > 0.0 {
        if p >= 1.0 {
            for v in 1..n as u32 {
                for w in 0..v {
                    edges.push((w, v));
                }
            }
        } else {
            // Walk pair slots (w, v) with w < v, jumping geometric gaps.
            let log_q = (1.0 - p).ln();
            let mut v: usize = 1;
            let mut w: i64 = -1;
            while v < n {
                let u: f64 = rng.gen();
                let skip = ((1.0 - u).ln() / log_q).floor() as i64;
                w += 1 + skip;
                while v < n && w >= v as i64 {
                    w -= v as i64;
                    v += 1;
                }
                if v < n {
                    edges.push((w as u32, v as u32));
                }
            }
        }
    }
    Ok((DegreeSample::from_edges(edges.iter().copied()), edges))
}

/// Connected caveman graph with per-edge rewiring.
///
/// Builds `communities` cliques of ⌊n/communities⌋ nodes (remainder spread
/// one per clique), connects them in a ring by relinking one edge per clique
/// to its predecessor, then visits every edge once in sorted order and, with
/// probability `p_rewire`, replaces one uniformly-chosen endpoint with a
/// node drawn uniformly from the whole graph (rejecting self-loops and
/// duplicate edges; after 64 failed draws the edge is kept). Rewiring
/// preserves the edge count.
pub fn gen_caveman<R: Rng>(
    n: usize,
    communities: usize,
    p_rewire: f64,
    rng: &mut R,
) -> Result<(DegreeSample, Vec<(u32, u32)>), SynthError> {
    if communities < 1 {
        return Err(SynthError::InvalidConfig("caveman needs communities >= 1".into()));
    }
    if n < 2 * communities {
        return Err(SynthError::InvalidConfig(format!(
            "caveman needs n >= 2*communities ({}), got {n}",
            2 * communities
        )));
    }
    if !(0.0..=1.0).contains(&p_rewire) {
        return Err(SynthError::InvalidConfig(format!("p must lie in [0, 1], got {p_rewire}")));
    }

    let base = n / communities;
    let remainder = n % communities;
    let sizes: Vec<usize> = (0..communities).map(|c| base + usize::from(c < remainder)).collect();
    let starts: Vec<u32> = sizes
        .iter()
        .scan(0u32, |acc, &s| {
            let start = *acc;
            *acc += s as u32;
            Some(start)
        })
        .collect();

    let norm = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    let mut edges: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
    for (&start, &size) in starts.iter().zip(&sizes) {
        for i in 0..size as u32 {
            for j in 0..i {
                edges.insert((start + j, start + i));
            }
        }
    }

    // Ring relink: each clique donates its (first, second) edge and gains a
    // link from its first node to the previous clique's last node.
    if communities > 1 {
        for c in 0..communities {
            let prev = (c + communities - 1) % communities;
            let prev_last = starts[prev] + sizes[prev] as u32 - 1;
            let removed = edges.remove(&(starts[c], starts[c] + 1));
            debug_assert!(removed, "clique edge exists before relinking");
            let inserted = edges.insert(norm(starts[c], prev_last));
            debug_assert!(inserted, "ring links are new edges");
        }
    }

    if p_rewire > 0.0 {
        let snapshot: Vec<(u32, u32)> = edges.iter().copied().collect();
        for edge in snapshot {
            if !edges.contains(&edge) {
                continue;
            }
            if rng.gen::<f64>() >= p_rewire {
                continue;
            }
            let keep = if rng.gen::<bool>() { edge.0 } else { edge.1 };
            for _ in 0..64 {
                let candidate = rng.gen_range(0..n as u32);
                if candidate == keep {
                    continue;
                }
                let replacement = norm(keep, candidate);
                if edges.contains(&replacement) {
                    continue;
                }
                edges.remove(&edge);
                edges.insert(replacement);
                break;
            }
        }
    }

    let edge_list: Vec<(u32, u32)> = edges.into_iter().collect();
    Ok((DegreeSample::from_edges(edge_list.iter().copied()), edge_list))
}

/// Which configuration a snapshot came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    A,
    B,
}

/// Ground truth for a generated scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// One label per snapshot.
    pub labels: Vec<Label>,
    /// Indices `i` where `labels[i] != labels[i-1]`; exactly `n_changes`.
    pub change_points: Vec<usize>,
}

/// Scenario specification: two alternating configurations plus schedule
/// shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub config_a: ModelConfig,
    pub config_b: ModelConfig,
    /// Number of configuration switches (>= 1).
    pub n_changes: usize,
    /// Run lengths (snapshots between switches) are drawn from
    /// `round(Normal(mean, var))`, clamped to >= 1.
    pub run_length_mean: f64,
    pub run_length_var: f64,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(config_a: ModelConfig, config_b: ModelConfig, n_changes: usize, seed: u64) -> Self {
        ScenarioSpec { config_a, config_b, n_changes, run_length_mean: 4.0, run_length_var: 2.0, seed }
    }
}

/// One generated snapshot.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub edges: Vec<(u32, u32)>,
    pub degrees: DegreeSample,
}

/// A generated scenario: snapshots plus ground truth.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub snapshots: Vec<Snapshot>,
    pub schedule: Schedule,
    /// Snapshots per run (one run per schedule segment; `n_changes + 1`).
    pub run_lengths: Vec<usize>,
    /// Node count drawn for each run.
    pub run_sizes: Vec<usize>,
}

/// Generates an alternating scenario.
///
/// The schedule alternates a → b → a → … over `n_changes + 1` runs. Run
/// lengths and one node count per run are drawn from a master stream; each
/// snapshot's graph is then generated from sub-seed `seed ⊕ snapshot_index`,
/// so snapshots can be generated in parallel deterministically.
///
/// The node count is drawn per *run*, not per snapshot: within a run the
/// generative process is meant to be stationary so that consecutive
/// same-label windows form genuine null pairs, while a change point may move
/// both the model parameter and the scale. A drawn size below the model's
/// minimum (2, or 2·communities) is clamped up to it.
pub fn gen_scenario(spec: &ScenarioSpec) -> Result<Scenario, SynthError> {
    spec.config_a.validate()?;
    spec.config_b.validate()?;
    if spec.n_changes < 1 {
        return Err(SynthError::InvalidConfig("n_changes must be >= 1".into()));
    }
    if spec.run_length_var < 0.0 {
        return Err(SynthError::InvalidConfig("run length variance must be >= 0".into()));
    }

    let mut master = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, u64::MAX));
    let length_dist = Normal::new(spec.run_length_mean, spec.run_length_var.sqrt())
        .map_err(|e| SynthError::InvalidConfig(format!("run length distribution: {e}")))?;

    let runs = spec.n_changes + 1;
    let mut run_lengths = Vec::with_capacity(runs);
    let mut run_sizes = Vec::with_capacity(runs);
    let mut plan: Vec<(Label, &ModelConfig, usize)> = Vec::new(); // per snapshot
    let mut labels = Vec::new();
    let mut change_points = Vec::new();
    for r in 0..runs {
        let (label, config) =
            if r % 2 == 0 { (Label::A, &spec.config_a) } else { (Label::B, &spec.config_b) };
        let length = (length_dist.sample(&mut master).round() as i64).max(1) as usize;
        let size = config.n.draw(&mut master).max(config.min_nodes());
        run_lengths.push(length);
        run_sizes.push(size);
        if r > 0 {
            change_points.push(labels.len());
        }
        for _ in 0..length {
            labels.push(label);
            plan.push((label, config, size));
        }
    }

    let snapshots: Result<Vec<Snapshot>, SynthError> = plan
        .par_iter()
        .enumerate()
        .map(|(index, (_, config, size))| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ index as u64);
            let (degrees, edges) = config.generate(*size, &mut rng)?;
            Ok(Snapshot { edges, degrees })
        })
        .collect();

    Ok(Scenario {
        snapshots: snapshots?,
        schedule: Schedule { labels, change_points },
        run_lengths,
        run_sizes,
    })
}
