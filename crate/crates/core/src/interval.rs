//! Closed intervals, Minkowski arithmetic and sample-level set statistics.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A closed bounded interval `[lower, upper]`. Point intervals are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::NonFinite("interval endpoint"));
        }
        if lower > upper {
            return Err(Error::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn point(x: f64) -> Result<Self> {
        Self::new(x, x)
    }

    /// Builds `[center - radius, center + radius]`.
    pub fn from_center_radius(center: f64, radius: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidInterval {
                lower: center - radius,
                upper: center + radius,
            });
        }
        Self::new(center - radius, center + radius)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn radius(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// Scalar multiple `c * self`; a negative factor swaps the endpoints.
    pub fn scale(&self, c: f64) -> Self {
        if c >= 0.0 {
            Self {
                lower: c * self.lower,
                upper: c * self.upper,
            }
        } else {
            Self {
                lower: c * self.upper,
                upper: c * self.lower,
            }
        }
    }

    /// Minkowski sum.
    pub fn add(&self, other: &Interval) -> Self {
        Self {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
        }
    }
}

/// Closed-interval hit predicate: true iff the two intervals share a point.
pub fn hits(x: &Interval, query: &Interval) -> bool {
    query.lower <= x.upper && query.upper >= x.lower
}

/// Minkowski linear combination `sum_i coeffs[i] * xs[i]`.
pub fn scale_add(coeffs: &[f64], xs: &[Interval]) -> Result<Interval> {
    if coeffs.is_empty() || xs.is_empty() {
        return Err(Error::EmptyCombination);
    }
    if coeffs.len() != xs.len() {
        return Err(Error::LengthMismatch(coeffs.len(), xs.len()));
    }
    let mut acc = Interval::point(0.0)?;
    for (c, x) in coeffs.iter().zip(xs) {
        acc = acc.add(&x.scale(*c));
    }
    Ok(acc)
}

/// Where a sample came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Seed(u64),
    File(String),
    Inline,
}

/// An ordered collection of observed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSample {
    items: Vec<Interval>,
    provenance: Provenance,
}

impl IntervalSample {
    pub fn new(items: Vec<Interval>, provenance: Provenance) -> Self {
        Self { items, provenance }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let items = pairs
            .iter()
            .map(|&(l, u)| Interval::new(l, u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(items, Provenance::Inline))
    }

    pub fn items(&self) -> &[Interval] {
        &self.items
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn lowers(&self) -> impl Iterator<Item = f64> + '_ {
        self.items.iter().map(|x| x.lower)
    }

    pub fn uppers(&self) -> impl Iterator<Item = f64> + '_ {
        self.items.iter().map(|x| x.upper)
    }

    /// Order-independent SHA-256 fingerprint of the sample contents.
    pub fn fingerprint(&self) -> String {
        let mut bits: Vec<(u64, u64)> = self
            .items
            .iter()
            .map(|x| (x.lower.to_bits(), x.upper.to_bits()))
            .collect();
        bits.sort_unstable();
        let mut hasher = Sha256::new();
        for (l, u) in bits {
            hasher.update(l.to_le_bytes());
            hasher.update(u.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

pub(crate) fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let mut n = 0usize;
    let mut s = 0.0;
    for x in xs {
        s += x;
        n += 1;
    }
    s / n as f64
}

/// Sample variance with the `n - 1` denominator.
pub(crate) fn sample_var(xs: &[f64]) -> f64 {
    let m = mean(xs.iter().copied());
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Empirical Aumann mean `[mean(lower), mean(upper)]`.
pub fn sample_aumann_mean(s: &IntervalSample) -> Result<Interval> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let lo = mean(s.lowers());
    let hi = mean(s.uppers());
    // Rounding can only break the ordering by an ulp when all lengths are ~0.
    Interval::new(lo, hi.max(lo))
}

/// Körner variance `Var(lower)/2 + Var(upper)/2` with sample variances.
pub fn sample_variance(s: &IntervalSample) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: s.len(),
        });
    }
    let lowers: Vec<f64> = s.lowers().collect();
    let uppers: Vec<f64> = s.uppers().collect();
    Ok(0.5 * sample_var(&lowers) + 0.5 * sample_var(&uppers))
}

/// The same variance through centers and radii: `Var(center) + Var(radius)`.
pub fn sample_variance_center_radius(s: &IntervalSample) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: s.len(),
        });
    }
    let centers: Vec<f64> = s.items.iter().map(Interval::center).collect();
    let radii: Vec<f64> = s.items.iter().map(Interval::radius).collect();
    Ok(sample_var(&centers) + sample_var(&radii))
}
