//! The minimum contrast estimator: simplex minimization of the contrast in
//! unconstrained coordinates, plus its sandwich covariance.

pub mod nelder_mead;
pub mod params;
pub mod sandwich;

use serde::Serialize;

use crate::config::{ContrastConfig, XiMethod};
use crate::contrast::{check_cache, contrast_with, make_rule, QuadratureRule, RegionS, WeightFn};
use crate::empirical::{build_hit_cache, moment_init, HitCountCache};
use crate::error::{Error, Result};
use crate::interval::IntervalSample;
use crate::model::{Formula, HittingFunction, HittingMode, HittingOptions, ThetaParams};

use nelder_mead::nelder_mead;
use params::{in_bounds, to_theta, to_unconstrained};
use sandwich::{matrix_c, matrix_xi, sandwich, score_covariance, Mat5, Sandwich};

/// Smallest sample accepted by [`fit`].
pub const MIN_FIT_SIZE: usize = 10;

/// Point estimate and optimizer state, without the covariance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub theta_hat: ThetaParams,
    pub contrast_value: f64,
    pub init: ThetaParams,
    pub init_contrast: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub simplex_diameter: f64,
    pub simplex_fspread: f64,
    pub region: RegionS,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitDiagnostics {
    pub order_x: usize,
    pub order_y: usize,
    pub xi_order: usize,
    pub xi_method: XiMethod,
    pub region: RegionS,
    pub hitting_mode: HittingMode,
    /// Closed form used at the estimate.
    pub formula: Formula,
    pub simplex_diameter: f64,
    pub simplex_fspread: f64,
    pub evaluations: usize,
    pub c_condition: f64,
    pub pseudo_inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub theta_hat: ThetaParams,
    pub contrast_value: f64,
    pub init: ThetaParams,
    pub init_contrast: f64,
    pub iterations: usize,
    pub converged: bool,
    pub n: usize,
    /// Per-observation asymptotic covariance; divide by `n` for `θ̂`.
    pub asym_cov: Mat5,
    /// `sqrt(diag(asym_cov) / n)`.
    pub std_errors: [f64; 5],
    pub diagnostics: FitDiagnostics,
}

/// Data bound to a quadrature rule, ready for repeated contrast evaluation.
#[derive(Debug, Clone)]
pub struct ContrastProblem {
    pub rule: QuadratureRule,
    pub cache: HitCountCache,
    pub weight: WeightFn,
    pub opts: HittingOptions,
}

impl ContrastProblem {
    pub fn new(s: &IntervalSample, region: &RegionS, cfg: &ContrastConfig) -> Result<Self> {
        cfg.validate()?;
        let rule = make_rule(region, cfg.order_x, cfg.order_y)?;
        let cache = build_hit_cache(s, rule.boxes())?;
        Ok(Self {
            rule,
            cache,
            weight: cfg.weight()?,
            opts: cfg.hitting_options(),
        })
    }

    pub fn contrast(&self, theta: &ThetaParams) -> Result<f64> {
        check_cache(&self.cache, &self.rule)?;
        let hf = HittingFunction::new(theta, &self.opts)?;
        Ok(contrast_with(&hf, &self.cache, &self.rule, &self.weight))
    }

    /// Objective in `u`-space: `+∞` outside the box bounds or wherever the
    /// contrast cannot be evaluated.
    fn objective(&self, u: &[f64; 5]) -> f64 {
        if !in_bounds(u) {
            return f64::INFINITY;
        }
        let theta = to_theta(u);
        match HittingFunction::new(&theta, &self.opts) {
            Ok(hf) => contrast_with(&hf, &self.cache, &self.rule, &self.weight),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Minimizes the contrast from the moment initializer; no covariance.
pub fn estimate(s: &IntervalSample, cfg: &ContrastConfig) -> Result<Estimate> {
    if s.len() < MIN_FIT_SIZE {
        return Err(Error::TooFewObservations {
            needed: MIN_FIT_SIZE,
            got: s.len(),
        });
    }
    cfg.validate()?;
    let init = moment_init(s)?;
    let region = cfg.resolve_region(s)?;
    let problem = ContrastProblem::new(s, &region, cfg)?;
    let init_contrast = problem.contrast(&init)?;
    if !init_contrast.is_finite() {
        return Err(Error::RegionDataMismatch);
    }
    let u0 = to_unconstrained(&init)?;
    let nm = nelder_mead(|u| problem.objective(u), u0, &cfg.optimizer());
    let (theta_hat, contrast_value) = if nm.f <= init_contrast {
        (to_theta(&nm.x), nm.f)
    } else {
        (init, init_contrast)
    };
    Ok(Estimate {
        theta_hat,
        contrast_value,
        init,
        init_contrast,
        iterations: nm.iterations,
        evaluations: nm.evaluations,
        converged: nm.converged,
        simplex_diameter: nm.diameter,
        simplex_fspread: nm.fspread,
        region,
        n: s.len(),
    })
}

/// Sandwich covariance at `theta` for the given region and configuration.
pub fn asymptotic_covariance(
    theta: &ThetaParams,
    region: &RegionS,
    cfg: &ContrastConfig,
) -> Result<Sandwich> {
    cfg.validate()?;
    let w = cfg.weight()?;
    let opts = cfg.hitting_options();
    let rule = make_rule(region, cfg.order_x, cfg.order_y)?;
    let c = matrix_c(theta, &rule, &w, cfg.grad_step, &opts)?;
    let xi = match cfg.xi_method {
        XiMethod::Quadrature => {
            let xi_rule = make_rule(region, cfg.xi_order, cfg.xi_order)?;
            matrix_xi(theta, &xi_rule, &w, cfg.grad_step, &opts)?
        }
        XiMethod::Montecarlo => score_covariance(
            theta,
            &rule,
            &w,
            cfg.grad_step,
            &opts,
            cfg.xi_mc_draws,
            cfg.seed,
        )?,
    };
    sandwich(c, xi, cfg.allow_pinv)
}

/// Full fit: moment start, simplex minimization and sandwich covariance.
pub fn fit(s: &IntervalSample, cfg: &ContrastConfig) -> Result<FitResult> {
    let est = estimate(s, cfg)?;
    let sw = asymptotic_covariance(&est.theta_hat, &est.region, cfg)?;
    let n = est.n as f64;
    let std_errors = std::array::from_fn(|i| (sw.cov[i][i].max(0.0) / n).sqrt());
    let formula = cfg.hitting_options().resolve(&est.theta_hat)?;
    Ok(FitResult {
        theta_hat: est.theta_hat,
        contrast_value: est.contrast_value,
        init: est.init,
        init_contrast: est.init_contrast,
        iterations: est.iterations,
        converged: est.converged,
        n: est.n,
        asym_cov: sw.cov,
        std_errors,
        diagnostics: FitDiagnostics {
            order_x: cfg.order_x,
            order_y: cfg.order_y,
            xi_order: cfg.xi_order,
            xi_method: cfg.xi_method,
            region: est.region,
            hitting_mode: cfg.hitting_mode,
            formula,
            simplex_diameter: est.simplex_diameter,
            simplex_fspread: est.simplex_fspread,
            evaluations: est.evaluations,
            c_condition: sw.c_condition,
            pseudo_inverse: sw.pseudo_inverse,
        },
    })
}
