//! Univariate and bivariate normal primitives.
//!
//! The bivariate CDF follows the Drezner-Wesolowsky correlation-integral
//! representation as refined by Genz: a 20-point Gauss-Legendre rule over the
//! arcsine-transformed correlation integral for `|rho| <= 0.925`, and an
//! asymptotic expansion plus a correction integral near `|rho| = 1`.
//! A [`BvnKernel`] holds everything that depends only on `rho`, so repeated
//! evaluations with a fixed correlation reuse the sines and weights.
#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const FRAC_1_2PI: f64 = 1.0 / (2.0 * PI);

// 20-point Gauss-Legendre rule, the ten negative nodes with their weights.
const GL20: [(f64, f64); 10] = [
    (0.1761400713915212e-01, -0.9931285991850949e+00),
    (0.4060142980038694e-01, -0.9639719272779138e+00),
    (0.6267204833410906e-01, -0.9122344282513259e+00),
    (0.8327674157670475e-01, -0.8391169718222188e+00),
    (0.1019301198172404e+00, -0.7463319064601508e+00),
    (0.1181945319615184e+00, -0.6360536807265150e+00),
    (0.1316886384491766e+00, -0.5108670019508271e+00),
    (0.1420961093183821e+00, -0.3737060887154196e+00),
    (0.1491729864726037e+00, -0.2277858511416451e+00),
    (0.1527533871307259e+00, -0.7652652113349733e-01),
];

/// Beyond this magnitude Φ is 0 or 1 to far below double precision resolution
/// of any probability this crate reports.
const Z_CLAMP: f64 = 40.0;

#[inline]
pub(crate) fn norm_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

#[inline]
pub(crate) fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    norm_pdf(x)
}

/// Standard normal CDF `Φ(x)`, computed through `erfc` so that
/// `Φ(-x) = 1 - Φ(x)` holds to rounding.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NonFinite("normal cdf argument"));
    }
    Ok(norm_cdf(x))
}

/// Precomputed bivariate normal kernel for one correlation value.
#[derive(Debug, Clone)]
pub struct BvnKernel {
    rho: f64,
    inner: KernelInner,
}

#[derive(Debug, Clone)]
enum KernelInner {
    Independent,
    Comonotone,
    Countermonotone,
    Moderate {
        // (weight * asr / 2π, sin value, 1 / (1 - sin²)) per node
        terms: [(f64, f64, f64); 20],
    },
    Strong {
        a_s: f64,
        a: f64,
        // (half-width * weight, x², sqrt(1 - x²), (1 - r)/(2 (1 + r)) in x) per node
        terms: [(f64, f64, f64, f64); 20],
    },
}

impl BvnKernel {
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_nan() || !(-1.0..=1.0).contains(&rho) {
            return Err(Error::InvalidCorrelation(rho));
        }
        Ok(Self::new_unchecked(rho))
    }

    pub(crate) fn new_unchecked(rho: f64) -> Self {
        let rho = rho.clamp(-1.0, 1.0);
        let inner = if rho == 0.0 {
            KernelInner::Independent
        } else if rho == 1.0 {
            KernelInner::Comonotone
        } else if rho == -1.0 {
            KernelInner::Countermonotone
        } else if rho.abs() <= 0.925 {
            let asr = 0.5 * rho.asin();
            let mut terms = [(0.0, 0.0, 0.0); 20];
            for (i, (w, x)) in GL20.iter().enumerate() {
                for (j, sgn) in [-1.0, 1.0].iter().enumerate() {
                    let sn = (asr * (sgn * x + 1.0)).sin();
                    terms[2 * i + j] = (w * asr * FRAC_1_2PI, sn, 1.0 / (1.0 - sn * sn));
                }
            }
            KernelInner::Moderate { terms }
        } else {
            let a_s = (1.0 - rho) * (1.0 + rho);
            let a = a_s.sqrt();
            let half = 0.5 * a;
            let mut terms = [(0.0, 0.0, 0.0, 0.0); 20];
            for (i, (w, x)) in GL20.iter().enumerate() {
                for (j, sgn) in [-1.0, 1.0].iter().enumerate() {
                    let xv = half * (sgn * x + 1.0);
                    let xs = xv * xv;
                    let rs = (1.0 - xs).sqrt();
                    terms[2 * i + j] = (half * w, xs, rs, (1.0 - rs) / (2.0 * (1.0 + rs)));
                }
            }
            KernelInner::Strong { a_s, a, terms }
        };
        Self { rho, inner }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `P(Z1 <= h, Z2 <= k)` for standard normals with this kernel's correlation.
    pub fn cdf(&self, h: f64, k: f64) -> f64 {
        if h.is_nan() || k.is_nan() {
            return f64::NAN;
        }
        if h <= -Z_CLAMP || k <= -Z_CLAMP {
            return 0.0;
        }
        if h >= Z_CLAMP {
            return norm_cdf(k.min(Z_CLAMP));
        }
        if k >= Z_CLAMP {
            return norm_cdf(h);
        }
        self.upper(-h, -k).clamp(0.0, 1.0)
    }

    /// `P(Z1 > h, Z2 > k)`.
    fn upper(&self, h: f64, k: f64) -> f64 {
        match &self.inner {
            KernelInner::Independent => norm_cdf(-h) * norm_cdf(-k),
            KernelInner::Comonotone => norm_cdf(-h.max(k)),
            KernelInner::Countermonotone => (norm_cdf(-h) - norm_cdf(k)).max(0.0),
            KernelInner::Moderate { terms } => {
                let hk = h * k;
                let hs = 0.5 * (h * h + k * k);
                let mut bvn = 0.0;
                for &(w, sn, inv) in terms {
                    bvn += w * ((sn * hk - hs) * inv).exp();
                }
                bvn + norm_cdf(-h) * norm_cdf(-k)
            }
            KernelInner::Strong { a_s, a, terms } => {
                let r = self.rho;
                // Negative correlation: P(X > h, Y > k) = P(X > h) - P(X > h, -Y > -k).
                let k = if r < 0.0 { -k } else { k };
                let hk = h * k;
                let b_s = (h - k) * (h - k);
                let c = (4.0 - hk) / 8.0;
                let d = (12.0 - hk) / 16.0;
                let mut bvn = 0.0;
                let asr = -0.5 * (b_s / a_s + hk);
                if asr > -100.0 {
                    bvn = a
                        * asr.exp()
                        * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0
                            + c * d * a_s * a_s / 5.0);
                }
                if -hk < 100.0 {
                    let b = b_s.sqrt();
                    bvn -= (-0.5 * hk).exp()
                        * SQRT_2PI
                        * norm_cdf(-b / a)
                        * b
                        * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
                }
                for &(wa, xs, rs, g) in terms {
                    let asr = -0.5 * (b_s / xs + hk);
                    if asr > -100.0 {
                        bvn += wa
                            * asr.exp()
                            * ((-hk * g).exp() / rs - (1.0 + c * xs * (1.0 + d * xs)));
                    }
                }
                bvn *= -FRAC_1_2PI;
                if r > 0.0 {
                    bvn + norm_cdf(-h.max(k))
                } else {
                    let mut v = -bvn;
                    if k > h {
                        if h < 0.0 {
                            v += norm_cdf(k) - norm_cdf(h);
                        } else {
                            v += norm_cdf(-h) - norm_cdf(-k);
                        }
                    }
                    v
                }
            }
        }
    }
}

/// Standard bivariate normal CDF `P(Z1 <= h, Z2 <= k)` with correlation `rho`.
pub fn bvn_cdf(h: f64, k: f64, rho: f64) -> Result<f64> {
    if h.is_nan() || k.is_nan() {
        return Err(Error::NonFinite("bivariate cdf argument"));
    }
    Ok(BvnKernel::new(rho)?.cdf(h, k))
}

/// A bivariate normal law given by mean and covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BvnSpec {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

impl BvnSpec {
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2]) -> Result<Self> {
        let spec = Self { mean, cov };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let [[c11, c12], [c21, c22]] = self.cov;
        if !(c11.is_finite() && c12.is_finite() && c21.is_finite() && c22.is_finite()) {
            return Err(Error::InvalidCovariance("non-finite entry".into()));
        }
        if (c12 - c21).abs() > 1e-12 * (c11.abs() + c22.abs()).max(1.0) {
            return Err(Error::InvalidCovariance("not symmetric".into()));
        }
        if c11 < 0.0 || c22 < 0.0 {
            return Err(Error::InvalidCovariance("negative variance".into()));
        }
        if c11 * c22 - c12 * c21 < -1e-10 * c11 * c22 {
            return Err(Error::InvalidCovariance("negative determinant".into()));
        }
        Ok(())
    }

    /// Affine image `D Y` of `Y ~ self`.
    pub fn transform(&self, d: [[f64; 2]; 2]) -> Self {
        let m = self.mean;
        let s = self.cov;
        let mean = [
            d[0][0] * m[0] + d[0][1] * m[1],
            d[1][0] * m[0] + d[1][1] * m[1],
        ];
        // D S D'
        let mut ds = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                ds[i][j] = d[i][0] * s[0][j] + d[i][1] * s[1][j];
            }
        }
        let mut cov = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                cov[i][j] = ds[i][0] * d[j][0] + ds[i][1] * d[j][1];
            }
        }
        cov[1][0] = cov[0][1];
        Self { mean, cov }
    }
}

/// A [`BvnSpec`] reduced to standardized coordinates and a prepared kernel.
#[derive(Debug, Clone)]
pub(crate) struct StandardizedBvn {
    mean: [f64; 2],
    sd: [f64; 2],
    kernel: BvnKernel,
}

impl StandardizedBvn {
    pub(crate) fn new(spec: &BvnSpec) -> Self {
        let sd = [
            spec.cov[0][0].max(0.0).sqrt(),
            spec.cov[1][1].max(0.0).sqrt(),
        ];
        let rho = if sd[0] > 0.0 && sd[1] > 0.0 {
            (spec.cov[0][1] / (sd[0] * sd[1])).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        Self {
            mean: spec.mean,
            sd,
            kernel: BvnKernel::new_unchecked(rho),
        }
    }

    pub(crate) fn cdf(&self, x: [f64; 2]) -> f64 {
        let z = |i: usize| -> Option<f64> {
            if self.sd[i] > 0.0 {
                Some((x[i] - self.mean[i]) / self.sd[i])
            } else {
                None
            }
        };
        let step = |i: usize| if x[i] >= self.mean[i] { 1.0 } else { 0.0 };
        match (z(0), z(1)) {
            (Some(h), Some(k)) => self.kernel.cdf(h, k),
            (Some(h), None) => step(1) * norm_cdf(h),
            (None, Some(k)) => step(0) * norm_cdf(k),
            (None, None) => step(0) * step(1),
        }
    }
}

/// `P(Y1 <= x1, Y2 <= x2)` for `Y ~ BVN(spec.mean, spec.cov)`. A zero variance
/// makes the corresponding coordinate a point mass.
pub fn affine_bvn_cdf(x: [f64; 2], spec: &BvnSpec) -> Result<f64> {
    spec.validate()?;
    if x[0].is_nan() || x[1].is_nan() {
        return Err(Error::NonFinite("bivariate cdf argument"));
    }
    Ok(StandardizedBvn::new(spec).cdf(x))
}

/// Moments of the signed truncations `η₊ = η·1(η ≥ 0)` and `η₋ = η·1(η < 0)`
/// of `η ~ N(mu, sigma2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncMoments {
    pub ep: f64,
    pub em: f64,
    pub ep2: f64,
    pub em2: f64,
    pub vp: f64,
    pub vm: f64,
}

pub fn trunc_moments(mu: f64, sigma2: f64) -> Result<TruncMoments> {
    if sigma2.is_nan() || mu.is_nan() {
        return Err(Error::NonFinite("truncated moment argument"));
    }
    if sigma2 < 0.0 {
        return Err(Error::NegativeVariance(sigma2));
    }
    let (ep, em, ep2, em2) = if sigma2 == 0.0 {
        let (p, m) = if mu >= 0.0 { (mu, 0.0) } else { (0.0, mu) };
        (p, m, p * p, m * m)
    } else {
        let s = sigma2.sqrt();
        let z = mu / s;
        let (cp, cm, pdf) = (norm_cdf(z), norm_cdf(-z), norm_pdf(z));
        let second = mu * mu + sigma2;
        (
            mu * cp + s * pdf,
            mu * cm - s * pdf,
            second * cp + mu * s * pdf,
            // Direct form of (mu² + σ²) - Ep2; no cancellation when Φ(-z) is tiny.
            second * cm - mu * s * pdf,
        )
    };
    Ok(TruncMoments {
        ep,
        em,
        ep2,
        em2,
        vp: (ep2 - ep * ep).max(0.0),
        vm: (em2 - em * em).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use proptest::prelude::*;

    /// Independent oracle: P(Z1<=h, Z2<=k) = ∫_{-∞}^{h} φ(x) Φ((k - ρx)/√(1-ρ²)) dx.
    fn bvn_oracle(h: f64, k: f64, rho: f64) -> f64 {
        let s = (1.0 - rho * rho).sqrt();
        let lo = -12.0f64;
        if h <= lo {
            return 0.0;
        }
        integrate_adaptive(
            |x| norm_pdf(x) * norm_cdf((k - rho * x) / s),
            lo,
            h.min(12.0),
            &[-6.0, -3.0, 0.0, 3.0, 6.0],
            1e-14,
            2000,
        )
        .unwrap()
        .value
    }

    #[test]
    fn normal_cdf_examples() {
        assert_eq!(std_normal_cdf(0.0).unwrap(), 0.5);
        // erfc series value for 1.9612/√2
        assert!((std_normal_cdf(1.9612).unwrap() - 0.975069).abs() < 1e-5);
        assert!(std_normal_cdf(-40.0).unwrap() < 1e-300);
        assert!(std_normal_cdf(f64::NAN).is_err());
        for x in [0.1, 0.7, 1.5, 3.0, 8.0] {
            let sum = std_normal_cdf(x).unwrap() + std_normal_cdf(-x).unwrap();
            assert!((sum - 1.0).abs() <= f64::EPSILON);
        }
    }

    #[test]
    fn normal_cdf_matches_high_precision_values() {
        // Φ values to 20 digits from the erfc series.
        let cases = [
            (1.0, 0.84134474606854293),
            (-1.0, 0.15865525393145707),
            (2.5, 0.99379033467422384),
            (-5.0, 2.8665157187919391e-7),
        ];
        for (x, want) in cases {
            let got = std_normal_cdf(x).unwrap();
            assert!((got - want).abs() < 1e-14, "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn bvn_independent_and_degenerate() {
        for &(h, k) in &[(0.3, -1.2), (1.5, 2.0), (-0.7, -0.1)] {
            let p = bvn_cdf(h, k, 0.0).unwrap();
            assert!((p - norm_cdf(h) * norm_cdf(k)).abs() < 1e-15);
            let q = bvn_cdf(h, k, 1.0).unwrap();
            assert!((q - norm_cdf(h.min(k))).abs() < 1e-15);
            let r = bvn_cdf(h, k, -1.0).unwrap();
            assert!((r - (norm_cdf(h) + norm_cdf(k) - 1.0).max(0.0)).abs() < 1e-15);
        }
        assert!(bvn_cdf(0.0, 0.0, 1.2).is_err());
    }

    #[test]
    fn bvn_orthant_identity() {
        for i in -99..=99 {
            let rho = i as f64 / 100.0;
            let p = bvn_cdf(0.0, 0.0, rho).unwrap();
            let want = 0.25 + rho.asin() / (2.0 * PI);
            assert!((p - want).abs() < 1e-10, "rho={rho}: {p} vs {want}");
        }
    }

    #[test]
    fn bvn_matches_integral_oracle() {
        let rhos = [
            -0.999, -0.97, -0.93, -0.9, -0.5, -0.1, 0.2, 0.6, 0.92, 0.95, 0.99, 0.9995,
        ];
        let pts = [-3.1, -1.7, -0.4, 0.0, 0.8, 2.2, 4.5];
        for &rho in &rhos {
            for &h in &pts {
                for &k in &pts {
                    let p = bvn_cdf(h, k, rho).unwrap();
                    let q = bvn_oracle(h, k, rho);
                    assert!((p - q).abs() < 1e-10, "({h},{k},{rho}): {p} vs {q}");
                }
            }
        }
    }

    #[test]
    fn affine_examples() {
        let spec = BvnSpec::new([0.0, 0.0], [[2.0, 0.0], [0.0, 5.0]]).unwrap();
        assert!((affine_bvn_cdf([0.0, 0.0], &spec).unwrap() - 0.25).abs() < 1e-15);
        let spec = BvnSpec::new([1.0, -3.0], [[4.0, 1.9], [1.9, 1.0]]).unwrap();
        assert!((affine_bvn_cdf([1e9, 1e9], &spec).unwrap() - 1.0).abs() < 1e-12);
        let diag = BvnSpec::new([1.0, -2.0], [[4.0, 0.0], [0.0, 9.0]]).unwrap();
        let p = affine_bvn_cdf([2.0, 1.0], &diag).unwrap();
        assert!((p - norm_cdf(0.5) * norm_cdf(1.0)).abs() < 1e-15);
        let point = BvnSpec::new([1.0, 0.0], [[0.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!((affine_bvn_cdf([1.5, 0.0], &point).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(affine_bvn_cdf([0.5, 0.0], &point).unwrap(), 0.0);
    }

    #[test]
    fn affine_rejects_bad_covariance() {
        assert!(BvnSpec::new([0.0; 2], [[1.0, 0.5], [0.4, 1.0]]).is_err());
        assert!(BvnSpec::new([0.0; 2], [[-1.0, 0.0], [0.0, 1.0]]).is_err());
        assert!(BvnSpec::new([0.0; 2], [[1.0, 2.0], [2.0, 1.0]]).is_err());
    }

    #[test]
    fn trunc_moment_examples() {
        let m = trunc_moments(0.0, 1.0).unwrap();
        assert!((m.ep - FRAC_1_SQRT_2PI).abs() < 1e-15);
        assert!((m.em + FRAC_1_SQRT_2PI).abs() < 1e-15);
        let d = trunc_moments(3.0, 0.0).unwrap();
        assert_eq!((d.ep, d.em, d.vp, d.vm), (3.0, 0.0, 0.0, 0.0));
        assert!(trunc_moments(1.0, -0.1).is_err());
    }

    #[test]
    fn trunc_moments_match_half_line_quadrature() {
        let (mu, s2) = (19.8573, 102.5263);
        let s = f64::sqrt(s2);
        let dens = |t: f64| norm_pdf((t - mu) / s) / s;
        let pos = integrate_adaptive(|t| t * dens(t), 0.0, mu + 15.0 * s, &[mu], 1e-12, 2000)
            .unwrap()
            .value;
        let neg = integrate_adaptive(|t| t * dens(t), mu - 15.0 * s, 0.0, &[], 1e-12, 2000)
            .unwrap()
            .value;
        let m = trunc_moments(mu, s2).unwrap();
        assert!((m.ep - pos).abs() < 1e-9, "{} vs {}", m.ep, pos);
        assert!((m.em - neg).abs() < 1e-9, "{} vs {}", m.em, neg);
        assert!((m.ep - 19.9522).abs() < 1e-3);
        assert!((m.em + 0.0948).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn trunc_identities(mu in -50.0..50.0f64, s2 in 1e-6..500.0f64) {
            let m = trunc_moments(mu, s2).unwrap();
            let scale1 = mu.abs().max(s2.sqrt());
            prop_assert!((m.ep + m.em - mu).abs() <= 1e-12 * scale1);
            let second = mu * mu + s2;
            prop_assert!((m.ep2 + m.em2 - second).abs() <= 1e-12 * second);
        }

        #[test]
        fn bvn_symmetric_in_arguments(h in -5.0..5.0f64, k in -5.0..5.0f64, rho in -1.0..=1.0f64) {
            let a = bvn_cdf(h, k, rho).unwrap();
            let b = bvn_cdf(k, h, rho).unwrap();
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn bvn_monotone_on_grid() {
        let grid: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.25).collect();
        let rhos: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.049).collect();
        for &rho in &rhos {
            let kern = BvnKernel::new(rho).unwrap();
            for &k in &grid {
                let mut prev = -1.0;
                for &h in &grid {
                    let p = kern.cdf(h, k);
                    assert!(p >= prev - 1e-15, "h monotonicity at ({h},{k},{rho})");
                    prev = p;
                }
            }
        }
        for &h in &grid {
            for &k in &grid {
                let mut prev = -1.0;
                for &rho in &rhos {
                    let p = bvn_cdf(h, k, rho).unwrap();
                    assert!(p >= prev - 1e-15, "rho monotonicity at ({h},{k},{rho})");
                    prev = p;
                }
            }
        }
    }
}
