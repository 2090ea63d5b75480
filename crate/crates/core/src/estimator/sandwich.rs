//! Asymptotic covariance `C⁻¹ Ξ C⁻¹` of the minimum contrast estimator.

use nalgebra::{Matrix5, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::contrast::{QuadratureRule, WeightFn};
use crate::error::{Error, Result};
use crate::interval::{hits, Interval};
use crate::model::{
    conditional_hit_prob, simulate, Formula, HittingFunction, HittingOptions, ThetaParams,
    CONDITIONAL_TOL,
};

/// A 5×5 matrix indexed like [`ThetaParams::to_array`].
pub type Mat5 = [[f64; 5]; 5];

/// Default relative finite-difference step.
pub const DEFAULT_GRAD_STEP: f64 = 1e-5;

/// Condition number above which `C` is inverted by pseudo-inverse.
pub const MAX_CONDITION: f64 = 1e12;

/// Per-component steps `h·max(1, |θ_i|)`, shrunk tenfold once if `θ ± step`
/// leaves the parameter space.
fn steps(theta: &ThetaParams, h: f64) -> Result<[f64; 5]> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidTheta(format!(
            "gradient step {h} must be positive"
        )));
    }
    let base = theta.to_array();
    let mut out = [0.0; 5];
    for i in 0..5 {
        let mut step = h * base[i].abs().max(1.0);
        let ok = |s: f64| {
            [s, -s].iter().all(|d| {
                let mut v = base;
                v[i] += d;
                ThetaParams::from_array(v).is_valid()
            })
        };
        if !ok(step) {
            step /= 10.0;
            if !ok(step) {
                return Err(Error::GradientStep(i));
            }
        }
        out[i] = step;
    }
    Ok(out)
}

/// Hitting functions at `θ ± step·e_i`, all using `formula`.
struct PerturbedLaws {
    steps: [f64; 5],
    plus: Vec<HittingFunction>,
    minus: Vec<HittingFunction>,
}

impl PerturbedLaws {
    fn new(theta: &ThetaParams, h: f64, formula: Formula) -> Result<Self> {
        let steps = steps(theta, h)?;
        let base = theta.to_array();
        let at = |i: usize, d: f64| {
            let mut v = base;
            v[i] += d;
            HittingFunction::with_formula(&ThetaParams::from_array(v), formula)
        };
        Ok(Self {
            steps,
            plus: (0..5).map(|i| at(i, steps[i])).collect(),
            minus: (0..5).map(|i| at(i, -steps[i])).collect(),
        })
    }

    fn grad(&self, a: f64, b: f64) -> [f64; 5] {
        let mut g = [0.0; 5];
        for i in 0..5 {
            g[i] = (self.plus[i].eval(a, b) - self.minus[i].eval(a, b)) / (2.0 * self.steps[i]);
        }
        g
    }
}

/// Central-difference gradient of `T_θ(k)` in θ-space. The formula is fixed
/// at the center so that no perturbed evaluation switches branches.
pub fn grad_t(
    theta: &ThetaParams,
    k: &Interval,
    h: f64,
    opts: &HittingOptions,
) -> Result<[f64; 5]> {
    theta.validate()?;
    let formula = opts.resolve(theta)?;
    Ok(PerturbedLaws::new(theta, h, formula)?.grad(k.lower(), k.upper()))
}

/// Gradients at every box, sharing the perturbed laws.
pub fn grad_field(
    theta: &ThetaParams,
    boxes: &[Interval],
    h: f64,
    opts: &HittingOptions,
) -> Result<Vec<[f64; 5]>> {
    theta.validate()?;
    let laws = PerturbedLaws::new(theta, h, opts.resolve(theta)?)?;
    Ok(boxes
        .iter()
        .map(|k| laws.grad(k.lower(), k.upper()))
        .collect())
}

/// `P(A hits k1 and A hits k2)`. Both events together say
/// `A_l <= min(b, d)` and `A_u >= max(a, c)`, which is evaluated by the
/// clamped conditional integral, valid even when `max(a, c) > min(b, d)`.
pub fn joint_hitting_prob(theta: &ThetaParams, k1: &Interval, k2: &Interval) -> Result<f64> {
    theta.validate()?;
    let lo = k1.lower().max(k2.lower());
    let hi = k1.upper().min(k2.upper());
    conditional_hit_prob(theta, lo, hi, CONDITIONAL_TOL)
}

/// `C = 2 ∬ ∇T ∇Tᵀ W` on `rule`.
pub fn matrix_c(
    theta: &ThetaParams,
    rule: &QuadratureRule,
    w: &WeightFn,
    h: f64,
    opts: &HittingOptions,
) -> Result<Mat5> {
    let grads = grad_field(theta, rule.boxes(), h, opts)?;
    let mut c = [[0.0; 5]; 5];
    for (node, g) in rule.nodes().iter().zip(&grads) {
        let s = 2.0 * w.c * node.weight;
        for i in 0..5 {
            for j in i..5 {
                c[i][j] += s * g[i] * g[j];
            }
        }
    }
    for i in 0..5 {
        for j in 0..i {
            c[i][j] = c[j][i];
        }
    }
    Ok(c)
}

/// Joint hit probabilities `P[p][q]` over all node pairs; the diagonal holds
/// the single-box hitting probabilities from the same integrator.
pub fn joint_matrix(theta: &ThetaParams, boxes: &[Interval]) -> Result<Vec<Vec<f64>>> {
    theta.validate()?;
    let m = boxes.len();
    let upper: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|p| {
            (p..m)
                .map(|q| joint_hitting_prob(theta, &boxes[p], &boxes[q]))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut full = vec![vec![0.0; m]; m];
    for p in 0..m {
        for q in p..m {
            full[p][q] = upper[p][q - p];
            full[q][p] = upper[p][q - p];
        }
    }
    Ok(full)
}

/// `Ξ = 4 ∬∬ (P_joint − T T) ∇T ∇Tᵀ W W` on the tensor square of `rule`.
pub fn matrix_xi(
    theta: &ThetaParams,
    rule: &QuadratureRule,
    w: &WeightFn,
    h: f64,
    opts: &HittingOptions,
) -> Result<Mat5> {
    let grads = grad_field(theta, rule.boxes(), h, opts)?;
    let joint = joint_matrix(theta, rule.boxes())?;
    let v: Vec<[f64; 5]> = rule
        .nodes()
        .iter()
        .zip(&grads)
        .map(|(node, g)| g.map(|x| w.c * node.weight * x))
        .collect();
    let m = v.len();
    let mut xi = [[0.0; 5]; 5];
    for p in 0..m {
        for q in 0..m {
            let k = joint[p][q] - joint[p][p] * joint[q][q];
            for i in 0..5 {
                for j in 0..5 {
                    xi[i][j] += k * v[p][i] * v[q][j];
                }
            }
        }
    }
    Ok(xi.map(|row| row.map(|x| 4.0 * x)))
}

/// Sample covariance of the per-observation scores
/// `R = 2 ∬ (1{X hits [a,b]} − T) ∇T W` over `draws` simulated observations.
pub fn score_covariance(
    theta: &ThetaParams,
    rule: &QuadratureRule,
    w: &WeightFn,
    h: f64,
    opts: &HittingOptions,
    draws: usize,
    seed: u64,
) -> Result<Mat5> {
    if draws < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: draws,
        });
    }
    let hf = HittingFunction::new(theta, opts)?;
    let grads = grad_field(theta, rule.boxes(), h, opts)?;
    let t: Vec<f64> = rule.boxes().iter().map(|k| hf.eval_box(k)).collect();
    let sample = simulate(theta, draws, seed)?;
    let scores: Vec<[f64; 5]> = sample
        .items()
        .iter()
        .map(|x| {
            let mut r = [0.0; 5];
            for ((node, k), (g, tp)) in rule
                .nodes()
                .iter()
                .zip(rule.boxes())
                .zip(grads.iter().zip(&t))
            {
                let y = if hits(x, k) { 1.0 } else { 0.0 };
                let s = 2.0 * w.c * node.weight * (y - tp);
                for i in 0..5 {
                    r[i] += s * g[i];
                }
            }
            r
        })
        .collect();
    Ok(sample_covariance(&scores))
}

fn sample_covariance(rows: &[[f64; 5]]) -> Mat5 {
    let n = rows.len() as f64;
    let mut mean = [0.0; 5];
    for r in rows {
        for i in 0..5 {
            mean[i] += r[i] / n;
        }
    }
    let mut cov = [[0.0; 5]; 5];
    for r in rows {
        for i in 0..5 {
            for j in 0..5 {
                cov[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]);
            }
        }
    }
    cov.map(|row| row.map(|x| x / (n - 1.0)))
}

/// `C⁻¹ Ξ C⁻¹` together with the factors and conditioning of `C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sandwich {
    pub cov: Mat5,
    pub c: Mat5,
    pub xi: Mat5,
    pub c_condition: f64,
    /// True when `C` was too ill-conditioned and a pseudo-inverse was used.
    pub pseudo_inverse: bool,
}

/// Combines `C` and `Ξ`. An ill-conditioned `C` is pseudo-inverted when
/// `allow_pinv` is set and is an error otherwise.
pub fn sandwich(c: Mat5, xi: Mat5, allow_pinv: bool) -> Result<Sandwich> {
    let cm = to_matrix(&c);
    let eig = SymmetricEigen::new(0.5 * (cm + cm.transpose()));
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let c_condition = if lmin > 0.0 {
        lmax / lmin
    } else {
        f64::INFINITY
    };
    let pseudo_inverse = !(c_condition < MAX_CONDITION);
    if pseudo_inverse && !allow_pinv {
        return Err(Error::SingularC(c_condition));
    }
    let cutoff = lmax / MAX_CONDITION;
    let inv_vals = eig
        .eigenvalues
        .map(|l| if l > cutoff { 1.0 / l } else { 0.0 });
    let c_inv = eig.eigenvectors * Matrix5::from_diagonal(&inv_vals) * eig.eigenvectors.transpose();
    let s = c_inv * to_matrix(&xi) * c_inv;
    let cov = from_matrix(&(0.5 * (s + s.transpose())));
    Ok(Sandwich {
        cov,
        c,
        xi,
        c_condition,
        pseudo_inverse,
    })
}

pub(crate) fn to_matrix(m: &Mat5) -> Matrix5<f64> {
    Matrix5::from_fn(|i, j| m[i][j])
}

pub(crate) fn from_matrix(m: &Matrix5<f64>) -> Mat5 {
    let mut out = [[0.0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = m[(i, j)];
        }
    }
    out
}

/// Smallest eigenvalue of a symmetric 5×5 matrix.
pub fn min_eigenvalue(m: &Mat5) -> f64 {
    SymmetricEigen::new(to_matrix(m)).eigenvalues.min()
}
