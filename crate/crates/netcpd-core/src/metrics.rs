//! Distances between degree distributions.
//!
//! Three metrics are provided, all operating on [`DegreeSample`]s:
//!
//! * **KS** — two-sample Kolmogorov–Smirnov statistic: the supremum of the
//!   absolute ECDF difference over the union support.
//! * **KL** — Kullback–Leibler divergence between additively smoothed PMFs
//!   on the union support, directed `D(comparison || base)`.
//! * **RH** — Relative Hausdorff distance between complementary cumulative
//!   degree histograms (CCDHs): the smallest ε such that each histogram is
//!   pointwise ε-close to a linear interpolation of the other, in both
//!   directions.

use serde::{Deserialize, Serialize};

use crate::degstats::{ecdf, DegreeSample, EmpiricalCDF};

/// Which distance to use, with per-metric parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MetricKind {
    Ks,
    Kl {
        /// Additive smoothing mass added to every union-support bin (> 0).
        pseudocount: f64,
    },
    Rh,
}

impl MetricKind {
    pub const DEFAULT_KL_PSEUDOCOUNT: f64 = 0.5;

    /// Short identifier used in verdict output: `ks`, `kl`, or `rh`.
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Ks => "ks",
            MetricKind::Kl { .. } => "kl",
            MetricKind::Rh => "rh",
        }
    }
}

impl Default for MetricKind {
    fn default() -> Self {
        MetricKind::Ks
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Dispatches to the configured metric.
///
/// KL is directed and is evaluated as `D(comparison || base)`; KS and RH are
/// symmetric.
pub fn distance(metric: &MetricKind, base: &DegreeSample, comparison: &DegreeSample) -> f64 {
    match metric {
        MetricKind::Ks => ks_distance(&ecdf(base), &ecdf(comparison)),
        MetricKind::Kl { pseudocount } => kl_divergence(comparison, base, *pseudocount),
        MetricKind::Rh => rh_distance(&ccdh(base), &ccdh(comparison)),
    }
}

/// Two-sample KS statistic: `sup_x |F_a(x) − F_b(x)|`.
///
/// Both step functions are right-continuous, so the supremum is attained on
/// the union of the two supports, which is what the merge below walks.
pub fn ks_distance(a: &EmpiricalCDF, b: &EmpiricalCDF) -> f64 {
    let mut best = 0.0f64;
    let (mut ia, mut ib) = (0usize, 0usize);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    while ia < a.support.len() || ib < b.support.len() {
        let xa = a.support.get(ia).copied();
        let xb = b.support.get(ib).copied();
        let x = match (xa, xb) {
            (Some(u), Some(v)) => u.min(v),
            (Some(u), None) => u,
            (None, Some(v)) => v,
            (None, None) => unreachable!("loop condition"),
        };
        if xa == Some(x) {
            fa = a.cum[ia];
            ia += 1;
        }
        if xb == Some(x) {
            fb = b.cum[ib];
            ib += 1;
        }
        best = best.max((fa - fb).abs());
    }
    best
}

/// KL divergence `D(P || Q)` between additively smoothed degree PMFs.
///
/// Both samples are histogrammed on their union support; `pseudocount` is
/// added to every bin and the result renormalized, so the divergence is
/// finite even when supports differ. `pseudocount` must be > 0.
pub fn kl_divergence(p_sample: &DegreeSample, q_sample: &DegreeSample, pseudocount: f64) -> f64 {
    assert!(pseudocount > 0.0, "pseudocount must be positive");
    let bins = union_counts(p_sample, q_sample);
    let k = bins.len() as f64;
    let np = p_sample.degrees.len() as f64;
    let nq = q_sample.degrees.len() as f64;
    let denom_p = np + pseudocount * k;
    let denom_q = nq + pseudocount * k;
    let mut sum = 0.0;
    for &(_, cp, cq) in &bins {
        let p = (cp as f64 + pseudocount) / denom_p;
        let q = (cq as f64 + pseudocount) / denom_q;
        sum += p * (p / q).ln();
    }
    sum
}

/// Union-support histogram: `(degree, count in a, count in b)` rows, with
/// degrees ascending. Inputs are sorted samples, so one merge pass suffices.
fn union_counts(a: &DegreeSample, b: &DegreeSample) -> Vec<(u32, usize, usize)> {
    let mut rows = Vec::new();
    let (da, db) = (&a.degrees, &b.degrees);
    let (mut i, mut j) = (0usize, 0usize);
    while i < da.len() || j < db.len() {
        let value = match (da.get(i), db.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => unreachable!("loop condition"),
        };
        let mut ca = 0usize;
        while i < da.len() && da[i] == value {
            ca += 1;
            i += 1;
        }
        let mut cb = 0usize;
        while j < db.len() && db[j] == value {
            cb += 1;
            j += 1;
        }
        rows.push((value, ca, cb));
    }
    rows
}

/// Complementary cumulative degree histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdh {
    /// Distinct degree values, strictly increasing.
    pub support: Vec<u32>,
    /// `counts_at_least[i]` = number of nodes with degree >= `support[i]`;
    /// positive and non-increasing. Raw counts, not normalized: RH is
    /// scale-homogeneous, so comparing raw counts keeps it meaningful for
    /// samples of different sizes.
    pub counts_at_least: Vec<f64>,
}

/// Computes the CCDH of a sample.
pub fn ccdh(sample: &DegreeSample) -> Ccdh {
    let degrees = &sample.degrees;
    let mut support = Vec::new();
    let mut counts_at_least = Vec::new();
    let n = degrees.len();
    let mut i = 0usize;
    while i < n {
        let value = degrees[i];
        support.push(value);
        counts_at_least.push((n - i) as f64);
        while i < n && degrees[i] == value {
            i += 1;
        }
    }
    Ccdh { support, counts_at_least }
}

/// Tolerance for the bisection on ε.
const RH_EPS_TOL: f64 = 1e-6;
/// Absolute slack absorbing floating-point noise in the closeness predicate.
const RH_NUMERIC_SLACK: f64 = 1e-12;

/// Relative Hausdorff distance between two CCDHs.
///
/// The smallest ε >= 0 such that for every support point `(d, F(d))` of
/// either histogram there is a point `d'` with `|d' − d| <= ε·d` where the
/// *interpolated* opposing histogram `G̃` satisfies `|G̃(d') − F(d)| <= ε·F(d)`.
/// `G̃` is linear between support points, constant below the smallest
/// support point, and 0 beyond the largest. The per-point minimal ε is found
/// by bisection (tolerance 1e-6) and the distance is the maximum over all
/// points of both directions.
pub fn rh_distance(a: &Ccdh, b: &Ccdh) -> f64 {
    direction_eps(a, b).max(direction_eps(b, a))
}

fn direction_eps(f: &Ccdh, g: &Ccdh) -> f64 {
    let mut worst = 0.0f64;
    for (&d, &fv) in f.support.iter().zip(&f.counts_at_least) {
        worst = worst.max(minimal_eps(d as f64, fv, g));
    }
    worst
}

/// Minimal ε for one point `(d, fv)` against interpolated histogram `g`.
///
/// Feasibility is monotone in ε (a larger ε both widens the search interval
/// and loosens the tolerance), so bisection applies. An ε of
/// `max(1, max_support/d)` is always feasible — the interval then reaches
/// past `g`'s support where `G̃ = 0` and `|0 − fv| <= ε·fv` — so the upper
/// doubling terminates.
fn minimal_eps(d: f64, fv: f64, g: &Ccdh) -> f64 {
    if rh_feasible(0.0, d, fv, g) {
        return 0.0;
    }
    let mut hi = 1.0f64;
    while !rh_feasible(hi, d, fv, g) {
        hi *= 2.0;
        debug_assert!(hi < 1e12, "feasible epsilon bound exists");
    }
    let mut lo = 0.0f64;
    while hi - lo > RH_EPS_TOL {
        let mid = 0.5 * (lo + hi);
        if rh_feasible(mid, d, fv, g) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Is there a `d'` in `[(1−ε)d, (1+ε)d]` with `|G̃(d') − fv| <= ε·fv`?
fn rh_feasible(eps: f64, d: f64, fv: f64, g: &Ccdh) -> bool {
    let lo = ((1.0 - eps) * d).max(0.0);
    let hi = (1.0 + eps) * d;
    min_abs_dev(g, lo, hi, fv) <= eps * fv + RH_NUMERIC_SLACK
}

/// Minimum of `|G̃(x) − fv|` over `x ∈ [lo, hi]`.
///
/// `G̃` is piecewise linear with a jump to 0 just past the last support
/// point, so the minimum is attained at an interval endpoint, at a support
/// point, at a crossing inside one linear segment, or on the flat tails.
/// Crossing checks are confined to genuine linear pieces — interpolating
/// across the terminal jump would invent values `G̃` never takes.
fn min_abs_dev(g: &Ccdh, lo: f64, hi: f64, fv: f64) -> f64 {
    let support = &g.support;
    let counts = &g.counts_at_least;
    debug_assert!(!support.is_empty(), "CCDH of a non-empty sample");
    let first = support[0] as f64;
    let last = *support.last().expect("non-empty") as f64;
    let mut best = f64::INFINITY;

    // Flat head: G̃ == counts[0] on [0, first].
    if lo <= first {
        best = best.min((counts[0] - fv).abs());
    }
    // Flat tail: G̃ == 0 on (last, ∞).
    if hi > last {
        best = best.min(fv.abs());
    }
    // Linear segments [s_j, s_{j+1}] overlapping [lo, hi].
    for j in 0..support.len().saturating_sub(1) {
        let (x1, x2) = (support[j] as f64, support[j + 1] as f64);
        if x2 < lo || x1 > hi {
            continue;
        }
        let (c1, c2) = (counts[j], counts[j + 1]);
        let interp = |x: f64| c1 + (c2 - c1) * (x - x1) / (x2 - x1);
        let a = lo.max(x1);
        let b = hi.min(x2);
        let (ga, gb) = (interp(a), interp(b));
        if (ga - fv) * (gb - fv) <= 0.0 {
            return 0.0; // fv is attained inside this segment
        }
        best = best.min((ga - fv).abs()).min((gb - fv).abs());
    }
    best
}
