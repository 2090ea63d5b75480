//! One-dimensional quadrature: Gauss-Legendre rules of arbitrary order and a
//! globally adaptive Gauss-Kronrod (7, 15) integrator.
#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Globally adaptive G7-K15 integration over `[a, b]`, starting from the
/// partition given by `breaks` (points outside `(a, b)` are ignored). The
/// segment with the largest error estimate is bisected until the summed
/// estimate falls below `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
    max_segments: usize,
) -> Result<Integral> {
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let mut segs: Vec<Segment> = pts
        .windows(2)
        .map(|w| {
            let (value, error) = gk15(&f, w[0], w[1]);
            Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            }
        })
        .collect();
    let mut evaluations = 15 * segs.len();

    loop {
        let total_err: f64 = segs.iter().map(|s| s.error).sum();
        if total_err <= tol {
            break;
        }
        if segs.len() >= max_segments {
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                tolerance: tol,
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty segment list");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Segment cannot be split further in floating point.
            return Err(Error::QuadratureNonConvergence {
                achieved: total_err,
                tolerance: tol,
            });
        }
        for (lo, hi) in [(s.a, mid), (mid, s.b)] {
            let (value, error) = gk15(&f, lo, hi);
            segs.push(Segment {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
        evaluations += 30;
    }

    // Sum in position order so the result does not depend on refinement history.
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Integral {
        value: segs.iter().map(|s| s.value).sum(),
        error: segs.iter().map(|s| s.error).sum(),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [2, 3, 6, 12, 20, 24, 48, 100] {
            let (x, w) = gauss_legendre(n);
            assert_eq!(x.len(), n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn legendre_matches_tabulated_20_point_rule() {
        // Largest node/weight pair of the 20-point rule.
        let (x, w) = gauss_legendre(20);
        assert!((x[19] - 0.9931285991850949).abs() < 1e-15);
        assert!((w[19] - 0.01761400713915212).abs() < 1e-15);
        assert!((x[10] - 0.07652652113349733).abs() < 1e-15);
        assert!((w[10] - 0.1527533871307259).abs() < 1e-15);
    }

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let n = 7;
        let (x, w) = gauss_legendre(n);
        // Integral of t^12 over [-1, 1] is 2/13; degree 2n-1 = 13 is exact.
        let q: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(12)).sum();
        assert!((q - 2.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_integrates_gaussian_and_kinks() {
        let g = integrate_adaptive(|x: f64| (-0.5 * x * x).exp(), -12.0, 12.0, &[], 1e-12, 500)
            .unwrap();
        assert!((g.value - (2.0 * PI).sqrt()).abs() < 1e-12);

        let k = integrate_adaptive(|x: f64| (x - 0.3).abs(), -1.0, 1.0, &[], 1e-10, 500).unwrap();
        assert!((k.value - 0.5 * (1.3f64.powi(2) + 0.7f64.powi(2))).abs() < 1e-10);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        let r = integrate_adaptive(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, &[], 1e-14, 20);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
