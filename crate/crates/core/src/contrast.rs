//! The contrast functional: integration region, tensor quadrature rule,
//! weight and the weighted squared gap between model and empirical hitting
//! functions.

use serde::{Deserialize, Serialize};

use crate::empirical::{nodes_fingerprint, HitCountCache};
use crate::error::{Error, Result};
use crate::interval::{mean, Interval, IntervalSample};
use crate::model::{HittingFunction, HittingOptions, ThetaParams};
use crate::quadrature::gauss_legendre;

/// Rectangle of test boxes in center/radius coordinates; `(x, y)` stands for
/// the box `[x - y, x + y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionS {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl RegionS {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let r = Self {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        r.validate()?;
        Ok(r)
    }

    /// Centers in `[20, 40]`, radii in `[0, 10]`: the region used for the
    /// simulation design point.
    pub fn simulation_design() -> Self {
        Self {
            x_min: 20.0,
            x_max: 40.0,
            y_min: 0.0,
            y_max: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = [self.x_min, self.x_max, self.y_min, self.y_max];
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidRegion("bounds must be finite".into()));
        }
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidRegion(format!(
                "x_min {} must be below x_max {}",
                self.x_min, self.x_max
            )));
        }
        if !(0.0 <= self.y_min && self.y_min < self.y_max) {
            return Err(Error::InvalidRegion(format!(
                "need 0 <= y_min < y_max, got [{}, {}]",
                self.y_min, self.y_max
            )));
        }
        Ok(())
    }

    /// Rule-of-thumb region from data: centers from the smallest center minus
    /// the mean radius to the largest plus the mean radius, radii from 0 to
    /// 1.25 times the largest radius.
    pub fn from_sample(s: &IntervalSample) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptySample);
        }
        let centers = s.items().iter().map(Interval::center);
        let c_min = centers.clone().fold(f64::INFINITY, f64::min);
        let c_max = centers.fold(f64::NEG_INFINITY, f64::max);
        let r_mean = mean(s.items().iter().map(Interval::radius));
        let r_max = s.items().iter().map(Interval::radius).fold(0.0, f64::max);
        Self::new(c_min - r_mean, c_max + r_mean, 0.0, 1.25 * r_max)
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }
}

/// A quadrature node: the box `[a, b]` and its weight, Jacobian included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadNode {
    pub a: f64,
    pub b: f64,
    pub weight: f64,
}

/// Tensor Gauss-Legendre rule over a region, mapped to `(a, b)` space.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    region: RegionS,
    order_x: usize,
    order_y: usize,
    nodes: Vec<QuadNode>,
    boxes: Vec<Interval>,
    fingerprint: String,
}

impl QuadratureRule {
    pub fn region(&self) -> &RegionS {
        &self.region
    }

    pub fn order_x(&self) -> usize {
        self.order_x
    }

    pub fn order_y(&self) -> usize {
        self.order_y
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    /// Node boxes in node order, for building a hit cache.
    pub fn boxes(&self) -> &[Interval] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// `∬ f(a, b) da db` over the region, summed in node order.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n.a, n.b)).sum()
    }
}

/// Builds the `order_x × order_y` tensor rule on `region`.
pub fn make_rule(region: &RegionS, order_x: usize, order_y: usize) -> Result<QuadratureRule> {
    region.validate()?;
    for o in [order_x, order_y] {
        if o < 2 {
            return Err(Error::InvalidOrder(o));
        }
    }
    let scaled = |order: usize, lo: f64, hi: f64| -> Vec<(f64, f64)> {
        let (xs, ws) = gauss_legendre(order);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        xs.iter()
            .zip(&ws)
            .map(|(x, w)| (mid + half * x, half * w))
            .collect()
    };
    let gx = scaled(order_x, region.x_min, region.x_max);
    let gy = scaled(order_y, region.y_min, region.y_max);
    let mut nodes = Vec::with_capacity(order_x * order_y);
    let mut boxes = Vec::with_capacity(order_x * order_y);
    for &(x, wx) in &gx {
        for &(y, wy) in &gy {
            let k = Interval::from_center_radius(x, y)?;
            nodes.push(QuadNode {
                a: k.lower(),
                b: k.upper(),
                weight: 2.0 * wx * wy,
            });
            boxes.push(k);
        }
    }
    let fingerprint = nodes_fingerprint(&boxes);
    Ok(QuadratureRule {
        region: *region,
        order_x,
        order_y,
        nodes,
        boxes,
        fingerprint,
    })
}

/// Constant weight function `W ≡ c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightFn {
    pub c: f64,
}

impl WeightFn {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidWeight(c));
        }
        Ok(Self { c })
    }
}

impl Default for WeightFn {
    fn default() -> Self {
        Self { c: 1.0 }
    }
}

/// `H(θ) = ∬ W·(T_θ − T̂)²`, evaluated on the rule the cache was built for.
pub fn contrast_h(
    theta: &ThetaParams,
    cache: &HitCountCache,
    rule: &QuadratureRule,
    w: &WeightFn,
    opts: &HittingOptions,
) -> Result<f64> {
    check_cache(cache, rule)?;
    let hf = HittingFunction::new(theta, opts)?;
    Ok(contrast_with(&hf, cache, rule, w))
}

pub(crate) fn check_cache(cache: &HitCountCache, rule: &QuadratureRule) -> Result<()> {
    if cache.nodes_fingerprint() != rule.fingerprint() || cache.counts().len() != rule.len() {
        return Err(Error::FingerprintMismatch);
    }
    Ok(())
}

/// Contrast with a prepared hitting function; the cache must match the rule.
pub(crate) fn contrast_with(
    hf: &HittingFunction,
    cache: &HitCountCache,
    rule: &QuadratureRule,
    w: &WeightFn,
) -> f64 {
    let inv_n = 1.0 / cache.n() as f64;
    rule.nodes
        .iter()
        .zip(cache.counts())
        .map(|(node, &count)| {
            let gap = hf.eval(node.a, node.b) - count as f64 * inv_n;
            node.weight * gap * gap
        })
        .sum::<f64>()
        * w.c
}

/// Limit of the contrast as the sample grows: `∬ W·(T_θ − T_ζ)²`.
pub fn limiting_n(
    theta: &ThetaParams,
    zeta: &ThetaParams,
    rule: &QuadratureRule,
    w: &WeightFn,
    opts: &HittingOptions,
) -> Result<f64> {
    let ht = HittingFunction::new(theta, opts)?;
    let hz = HittingFunction::new(zeta, opts)?;
    Ok(w.c
        * rule.integrate(|a, b| {
            let gap = ht.eval(a, b) - hz.eval(a, b);
            gap * gap
        }))
}
