//! Monte-Carlo bootstrap change test over consecutive window pairs.
//!
//! For a pair (base, comparison) the observed distance is compared against
//! the null distribution formed by distances between the base sample and
//! `n_resamples` with-replacement resamples of the base's own degrees. The
//! rejection threshold is the empirical α-quantile of those distances; the
//! p-value uses the add-one Monte-Carlo correction.
//!
//! Determinism: draw `k` uses sub-seed `seed ⊕ k`, so the resample loop can
//! run in parallel and still produce identical results in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degstats::{ecdf, subsample, DegreeSample, EmpiricalCDF};
use crate::derive_seed;
use crate::metrics::{ccdh, kl_divergence, ks_distance, rh_distance, Ccdh, MetricKind};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("cannot bootstrap an empty degree sample")]
    EmptySample,
    #[error("need at least 2 non-empty windows, found {available}")]
    TooFewWindows { available: usize },
    #[error("invalid detector configuration: {0}")]
    InvalidConfig(String),
}

/// How large each bootstrap resample is.
///
/// The degrees inside one window are not independent draws — every edge
/// contributes to two degrees — so an i.i.d. resample of the base
/// understates the null variance of a *two-window* comparison. Shrinking the
/// resample widens the null distances and compensates. `Pair` applies a
/// calibrated 4/5 deflation on top of the half-harmonic size and holds the
/// false-positive rate of same-model window pairs near the nominal 1−α;
/// `Harmonic` is the undeflated variant (slightly anticonservative);
/// `MatchComparison`/`MatchBase` mirror a window's node count directly and
/// reject far too often on graph data — they are provided for study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResampleSize {
    /// `max(1, round(4·n_b·n_c / (5·(n_b + n_c))))` — calibrated default.
    Pair,
    /// `max(1, round(n_b·n_c / (n_b + n_c)))` — half the harmonic mean.
    Harmonic,
    /// The comparison window's node count.
    MatchComparison,
    /// The base window's node count.
    MatchBase,
    /// A fixed size.
    Explicit(usize),
}

impl ResampleSize {
    pub fn resolve(&self, base_nodes: usize, comp_nodes: usize) -> usize {
        let half_harmonic = || {
            let (nb, nc) = (base_nodes as f64, comp_nodes as f64);
            nb * nc / (nb + nc)
        };
        match self {
            ResampleSize::Pair => ((0.8 * half_harmonic()).round() as usize).max(1),
            ResampleSize::Harmonic => ((half_harmonic()).round() as usize).max(1),
            ResampleSize::MatchComparison => comp_nodes.max(1),
            ResampleSize::MatchBase => base_nodes.max(1),
            ResampleSize::Explicit(n) => (*n).max(1),
        }
    }
}

impl Default for ResampleSize {
    fn default() -> Self {
        ResampleSize::Pair
    }
}

/// Bootstrap test configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Number of bootstrap draws (>= 100).
    pub n_resamples: usize,
    /// Confidence level in (0, 1); the threshold is the empirical
    /// α-quantile of the bootstrap distances.
    pub alpha: f64,
    pub resample_size: ResampleSize,
    pub seed: u64,
    pub metric: MetricKind,
    /// When set, both windows of every pair are independently subsampled to
    /// at most this many nodes before testing.
    pub subsample: Option<usize>,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            n_resamples: 1000,
            alpha: 0.95,
            resample_size: ResampleSize::default(),
            seed: 0,
            metric: MetricKind::default(),
            subsample: None,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<(), DetectorError> {
        if self.n_resamples < 100 {
            return Err(DetectorError::InvalidConfig(format!(
                "n_resamples must be >= 100, got {}",
                self.n_resamples
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(DetectorError::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if let MetricKind::Kl { pseudocount } = self.metric {
            if !(pseudocount > 0.0) {
                return Err(DetectorError::InvalidConfig(format!(
                    "KL pseudocount must be > 0, got {pseudocount}"
                )));
            }
        }
        if self.subsample == Some(0) {
            return Err(DetectorError::InvalidConfig("subsample must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one bootstrap test.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapOutcome {
    pub distance: f64,
    pub threshold: f64,
    pub p_value: f64,
    pub rejected: bool,
}

/// One change decision for a window pair.
///
/// Field order is the output schema (JSONL objects and the CSV header both
/// follow it). `base_nodes`/`comp_nodes` report the windows' full node
/// counts, before any subsampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeVerdict {
    pub base_index: usize,
    pub comp_index: usize,
    pub base_nodes: usize,
    pub comp_nodes: usize,
    pub distance: f64,
    pub threshold: f64,
    pub p_value: f64,
    pub rejected: bool,
    pub alpha: f64,
    pub metric: String,
}

/// Runs the bootstrap change test on one window pair.
///
/// Steps: (1) observed = distance(base, comparison); (2) for k = 1..=n,
/// d_k = distance(base, resample_k) where resample_k draws the configured
/// number of degrees with replacement from base; (3) threshold = the
/// ascending-sorted d at rank ⌈α·n⌉; (4) p = (1 + #{d_k >= observed})/(n+1);
/// (5) rejected iff observed > threshold. `cfg.subsample` is *not* applied
/// here — [`detect_sequence`] subsamples windows before pairing.
pub fn bootstrap_test(
    base: &DegreeSample,
    comparison: &DegreeSample,
    cfg: &BootstrapConfig,
) -> Result<BootstrapOutcome, DetectorError> {
    cfg.validate()?;
    if base.is_empty() || comparison.is_empty() {
        return Err(DetectorError::EmptySample);
    }
    let observed = crate::metrics::distance(&cfg.metric, base, comparison);
    let distances = bootstrap_distances(base, comparison.node_count, cfg);
    let threshold = threshold_at(&distances, cfg.alpha);
    let p_value = p_value_of(&distances, observed);
    Ok(BootstrapOutcome { distance: observed, threshold, p_value, rejected: observed > threshold })
}

/// Sorted (ascending) bootstrap null distances for one pair.
fn bootstrap_distances(base: &DegreeSample, comp_nodes: usize, cfg: &BootstrapConfig) -> Vec<f64> {
    let m = cfg.resample_size.resolve(base.node_count, comp_nodes);
    let prepared = PreparedBase::new(&cfg.metric, base);
    let mut distances: Vec<f64> = (1..=cfg.n_resamples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ k);
            let draw = resample_with_replacement(base, m, &mut rng);
            prepared.distance_to(&draw)
        })
        .collect();
    distances.sort_unstable_by(f64::total_cmp);
    distances
}

/// Base-side precomputation shared across all draws of one test.
enum PreparedBase<'a> {
    Ks(EmpiricalCDF),
    Kl { base: &'a DegreeSample, pseudocount: f64 },
    Rh(Ccdh),
}

impl<'a> PreparedBase<'a> {
    fn new(metric: &MetricKind, base: &'a DegreeSample) -> Self {
        match metric {
            MetricKind::Ks => PreparedBase::Ks(ecdf(base)),
            MetricKind::Kl { pseudocount } => PreparedBase::Kl { base, pseudocount: *pseudocount },
            MetricKind::Rh => PreparedBase::Rh(ccdh(base)),
        }
    }

    fn distance_to(&self, draw: &DegreeSample) -> f64 {
        match self {
            PreparedBase::Ks(base_cdf) => ks_distance(base_cdf, &ecdf(draw)),
            PreparedBase::Kl { base, pseudocount } => kl_divergence(draw, base, *pseudocount),
            PreparedBase::Rh(base_ccdh) => rh_distance(base_ccdh, &ccdh(draw)),
        }
    }
}

fn resample_with_replacement<R: Rng>(base: &DegreeSample, m: usize, rng: &mut R) -> DegreeSample {
    let mut degrees: Vec<u32> = (0..m).map(|_| base.degrees[rng.gen_range(0..base.degrees.len())]).collect();
    degrees.sort_unstable();
    DegreeSample { degrees, node_count: m }
}

/// Empirical α-quantile: the ascending-sorted value at (1-based) rank
/// ⌈α·n⌉. The tiny downward guard keeps an exactly-integer α·n from being
/// pushed up a rank by floating-point noise.
fn threshold_at(sorted: &[f64], alpha: f64) -> f64 {
    let n = sorted.len();
    let rank = ((alpha * n as f64) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(n) - 1]
}

/// Add-one Monte-Carlo p-value; minimum attainable is `1/(n+1)`.
fn p_value_of(sorted: &[f64], observed: f64) -> f64 {
    let below = sorted.partition_point(|&d| d < observed);
    let at_least = sorted.len() - below;
    (1 + at_least) as f64 / (sorted.len() + 1) as f64
}

/// A window pair readied for testing: subsampled samples plus a derived
/// per-pair seed.
struct PreparedPair {
    base_index: usize,
    comp_index: usize,
    base_nodes: usize,
    comp_nodes: usize,
    base: DegreeSample,
    comp: DegreeSample,
    seed: u64,
}

/// Result of a sequence scan: verdicts in window order plus the indices of
/// windows that were skipped for being empty (pairs bridge over them, which
/// the verdicts' non-consecutive indices also show).
#[derive(Debug, Clone)]
pub struct DetectOutcome {
    pub verdicts: Vec<ChangeVerdict>,
    pub skipped: Vec<usize>,
}

fn prepare_pairs(
    samples: &[Option<DegreeSample>],
    cfg: &BootstrapConfig,
) -> Result<(Vec<PreparedPair>, Vec<usize>), DetectorError> {
    let mut present: Vec<(usize, &DegreeSample)> = Vec::new();
    let mut skipped = Vec::new();
    for (index, sample) in samples.iter().enumerate() {
        match sample {
            Some(s) if !s.is_empty() => present.push((index, s)),
            _ => skipped.push(index),
        }
    }
    if present.len() < 2 {
        return Err(DetectorError::TooFewWindows { available: present.len() });
    }
    let pairs = present
        .windows(2)
        .map(|w| {
            let (base_index, base) = w[0];
            let (comp_index, comp) = w[1];
            // One derived stream per pair: the bootstrap seed plus one
            // independent subsample draw per side.
            let mut pair_rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, comp_index as u64));
            let boot_seed: u64 = pair_rng.gen();
            let sub_base_seed: u64 = pair_rng.gen();
            let sub_comp_seed: u64 = pair_rng.gen();
            let (base, comp) = match cfg.subsample {
                Some(n) => (
                    subsample(base, n, &mut ChaCha8Rng::seed_from_u64(sub_base_seed)),
                    subsample(comp, n, &mut ChaCha8Rng::seed_from_u64(sub_comp_seed)),
                ),
                None => (base.clone(), comp.clone()),
            };
            PreparedPair {
                base_index,
                comp_index,
                base_nodes: w[0].1.node_count,
                comp_nodes: w[1].1.node_count,
                base,
                comp,
                seed: boot_seed,
            }
        })
        .collect();
    Ok((pairs, skipped))
}

/// Tests every consecutive pair of non-empty windows.
///
/// `samples[i]` is window i's degree sample, or `None` for an empty window.
/// Empty (or `None`) windows are bridged: the pairing continues across them
/// and their indices are reported in [`DetectOutcome::skipped`]. Subsampling,
/// when configured, is applied to both sides of every pair with independent
/// deterministic draws. Emits exactly (non-empty windows − 1) verdicts, in
/// window order.
pub fn detect_sequence(
    samples: &[Option<DegreeSample>],
    cfg: &BootstrapConfig,
) -> Result<DetectOutcome, DetectorError> {
    cfg.validate()?;
    let (pairs, skipped) = prepare_pairs(samples, cfg)?;
    let verdicts: Result<Vec<ChangeVerdict>, DetectorError> = pairs
        .par_iter()
        .map(|pair| {
            let pair_cfg = BootstrapConfig { seed: pair.seed, ..cfg.clone() };
            let outcome = bootstrap_test(&pair.base, &pair.comp, &pair_cfg)?;
            Ok(ChangeVerdict {
                base_index: pair.base_index,
                comp_index: pair.comp_index,
                base_nodes: pair.base_nodes,
                comp_nodes: pair.comp_nodes,
                distance: outcome.distance,
                threshold: outcome.threshold,
                p_value: outcome.p_value,
                rejected: outcome.rejected,
                alpha: cfg.alpha,
                metric: cfg.metric.name().to_string(),
            })
        })
        .collect();
    Ok(DetectOutcome { verdicts: verdicts?, skipped })
}

/// Evaluates every pair at several confidence levels, reusing one bootstrap
/// distance set per pair.
///
/// `alphas` must be strictly ascending, each in (0, 1). Returns one verdict
/// per (pair, alpha), pair-major — the distance and p-value repeat within a
/// pair while threshold and rejection vary with alpha. A pair rejected at a
/// low α but not a high one signals a weak change.
pub fn sensitivity_profile(
    samples: &[Option<DegreeSample>],
    cfg: &BootstrapConfig,
    alphas: &[f64],
) -> Result<DetectOutcome, DetectorError> {
    cfg.validate()?;
    if alphas.is_empty() {
        return Err(DetectorError::InvalidConfig("at least one alpha is required".into()));
    }
    if !alphas.iter().all(|a| *a > 0.0 && *a < 1.0) {
        return Err(DetectorError::InvalidConfig("alphas must lie in (0, 1)".into()));
    }
    if !alphas.windows(2).all(|w| w[0] < w[1]) {
        return Err(DetectorError::InvalidConfig("alphas must be strictly ascending".into()));
    }
    let (pairs, skipped) = prepare_pairs(samples, cfg)?;
    let rows: Vec<Vec<ChangeVerdict>> = pairs
        .par_iter()
        .map(|pair| {
            let pair_cfg = BootstrapConfig { seed: pair.seed, ..cfg.clone() };
            let observed = crate::metrics::distance(&cfg.metric, &pair.base, &pair.comp);
            let distances = bootstrap_distances(&pair.base, pair.comp.node_count, &pair_cfg);
            let p_value = p_value_of(&distances, observed);
            alphas
                .iter()
                .map(|&alpha| {
                    let threshold = threshold_at(&distances, alpha);
                    ChangeVerdict {
                        base_index: pair.base_index,
                        comp_index: pair.comp_index,
                        base_nodes: pair.base_nodes,
                        comp_nodes: pair.comp_nodes,
                        distance: observed,
                        threshold,
                        p_value,
                        rejected: observed > threshold,
                        alpha,
                        metric: cfg.metric.name().to_string(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(DetectOutcome { verdicts: rows.into_iter().flatten().collect(), skipped })
}
