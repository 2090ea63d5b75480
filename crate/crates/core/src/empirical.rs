//! Data-side statistics: empirical hitting function, moment initialization
//! and kernel density curves.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gaussian::norm_pdf;
use crate::interval::{hits, mean, sample_var, Interval, IntervalSample};
use crate::model::ThetaParams;

/// Fraction of sample intervals hit by `query`.
pub fn empirical_hitting(s: &IntervalSample, query: &Interval) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let count = s.items().iter().filter(|x| hits(x, query)).count();
    Ok(count as f64 / s.len() as f64)
}

/// SHA-256 over the node coordinates, in order.
pub fn nodes_fingerprint(nodes: &[Interval]) -> String {
    let mut hasher = Sha256::new();
    for k in nodes {
        hasher.update(k.lower().to_bits().to_le_bytes());
        hasher.update(k.upper().to_bits().to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Hit counts of a fixed sample at fixed query boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct HitCountCache {
    counts: Vec<usize>,
    n: usize,
    sample_fingerprint: String,
    nodes_fingerprint: String,
}

impl HitCountCache {
    /// Cache with explicit counts, e.g. synthetic data for tests.
    pub fn from_counts(counts: Vec<usize>, n: usize, nodes: &[Interval]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        if counts.len() != nodes.len() {
            return Err(Error::LengthMismatch(counts.len(), nodes.len()));
        }
        if let Some(&count) = counts.iter().find(|&&c| c > n) {
            return Err(Error::InvalidCount { count, n });
        }
        Ok(Self {
            counts,
            n,
            sample_fingerprint: String::from("synthetic"),
            nodes_fingerprint: nodes_fingerprint(nodes),
        })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample_fingerprint(&self) -> &str {
        &self.sample_fingerprint
    }

    pub fn nodes_fingerprint(&self) -> &str {
        &self.nodes_fingerprint
    }

    /// Empirical hitting probability at node `j`.
    pub fn fraction(&self, j: usize) -> f64 {
        self.counts[j] as f64 / self.n as f64
    }
}

/// Counts hits at every node.
///
/// A box `[a, b]` misses `x` exactly when `x.lower > b` or `x.upper < a`.
/// Those events are disjoint, so each count is `n` minus two rank queries on
/// the sorted endpoints.
pub fn build_hit_cache(s: &IntervalSample, nodes: &[Interval]) -> Result<HitCountCache> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut lowers: Vec<f64> = s.lowers().collect();
    let mut uppers: Vec<f64> = s.uppers().collect();
    lowers.sort_by(f64::total_cmp);
    uppers.sort_by(f64::total_cmp);
    let n = s.len();
    let counts = nodes
        .iter()
        .map(|k| {
            let above = n - lowers.partition_point(|&l| l <= k.upper());
            let below = uppers.partition_point(|&u| u < k.lower());
            n - above - below
        })
        .collect();
    Ok(HitCountCache {
        counts,
        n,
        sample_fingerprint: s.fingerprint(),
        nodes_fingerprint: nodes_fingerprint(nodes),
    })
}

/// Method-of-moments starting value, treating lengths as `|η|`.
///
/// `μ = mean(upper) - mean(lower)`, `a0 = mean(lower)/μ`, and `Σ` is the
/// sample covariance of `(center - (a0 + ½)·length, length)`.
pub fn moment_init(s: &IntervalSample) -> Result<ThetaParams> {
    if s.len() < 3 {
        return Err(Error::TooFewObservations {
            needed: 3,
            got: s.len(),
        });
    }
    moment_estimates(s)
}

fn moment_estimates(s: &IntervalSample) -> Result<ThetaParams> {
    let mean_lo = mean(s.lowers());
    let mean_hi = mean(s.uppers());
    let mu = mean_hi - mean_lo;
    if !(mu > 0.0) {
        return Err(Error::DegenerateLengths(mu));
    }
    let a0 = mean_lo / mu;
    let lengths: Vec<f64> = s.items().iter().map(Interval::length).collect();
    let deltas: Vec<f64> = s
        .items()
        .iter()
        .zip(&lengths)
        .map(|(x, l)| x.center() - (a0 + 0.5) * l)
        .collect();
    let md = mean(deltas.iter().copied());
    let ml = mean(lengths.iter().copied());
    let mut s11 = sample_var(&deltas);
    let mut s22 = sample_var(&lengths);
    let s12 = deltas
        .iter()
        .zip(&lengths)
        .map(|(d, l)| (d - md) * (l - ml))
        .sum::<f64>()
        / (s.len() as f64 - 1.0);
    if !(s11 > 0.0 && s22 > 0.0 && s11 * s22 - s12 * s12 > 0.0) {
        let trace = s11 + s22;
        let bump = if trace > 0.0 { 1e-8 * trace } else { 1e-8 };
        s11 += bump;
        s22 += bump;
    }
    ThetaParams::new(a0, mu, s11, s12, s22)
}

/// Silverman's rule-of-thumb bandwidth `1.06·σ̂·n^(-1/5)`.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: values.len(),
        });
    }
    let sd = sample_var(values).sqrt();
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(1.06 * sd * (values.len() as f64).powf(-0.2))
}

/// A density curve evaluated on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    pub bandwidth: f64,
    pub points: Vec<(f64, f64)>,
}

/// Gaussian kernel density estimate with Silverman bandwidth.
pub fn kde_curve(values: &[f64], grid: &[f64]) -> Result<DensityCurve> {
    let h = silverman_bandwidth(values)?;
    let scale = 1.0 / (values.len() as f64 * h);
    let points = grid
        .iter()
        .map(|&x| {
            let d: f64 = values.iter().map(|v| norm_pdf((x - v) / h)).sum();
            (x, d * scale)
        })
        .collect();
    Ok(DensityCurve {
        bandwidth: h,
        points,
    })
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
