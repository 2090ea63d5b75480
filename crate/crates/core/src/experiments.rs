//! Replication study and data-analysis pipeline built on the estimator.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::ContrastConfig;
use crate::empirical::{kde_curve, linspace};
use crate::error::{Error, Result};
use crate::estimator::{estimate, fit, FitResult};
use crate::gaussian::norm_pdf;
use crate::interval::{sample_aumann_mean, Interval, IntervalSample};
use crate::model::{
    center_length_laws, model_mean, model_variance, simulate, CenterLengthLaws, ThetaParams,
};

/// Mixes `(master, n, rep)` into a replication seed with splitmix64 rounds.
pub fn replication_seed(master: u64, n: usize, rep: usize) -> u64 {
    let mut z = splitmix64(master);
    z = splitmix64(z ^ n as u64);
    splitmix64(z ^ rep as u64)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Settings {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub truth: ThetaParams,
}

impl Default for Table1Settings {
    fn default() -> Self {
        Self {
            sizes: vec![100, 200, 300, 400, 500],
            reps: 10,
            truth: ThetaParams::simulation_design(),
        }
    }
}

/// One simulate-and-fit run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replication {
    pub n: usize,
    pub rep: usize,
    pub seed: u64,
    pub theta_hat: Option<ThetaParams>,
    pub converged: bool,
    pub error: Option<String>,
}

/// Summary for one sample size. Σ columns are spectral norms of the
/// elementwise bias and standard-error matrices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub n: usize,
    pub bias_a0: f64,
    pub ste_a0: f64,
    pub bias_mu: f64,
    pub ste_mu: f64,
    pub bias_sigma: f64,
    pub ste_sigma: f64,
    pub median_err_a0: f64,
    pub median_err_mu: f64,
    /// Median of `‖Σ̂ − Σ₀‖₂`.
    pub median_err_sigma: f64,
    pub succeeded: usize,
    pub failed: usize,
}

/// Count of adjacent increases of the median error as `n` grows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendCheck {
    pub a0_inversions: usize,
    pub mu_inversions: usize,
    pub sigma_inversions: usize,
    pub allowed: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Report {
    pub settings: Table1Settings,
    pub master_seed: u64,
    pub rows: Vec<Table1Row>,
    pub trend: TrendCheck,
    pub replications: Vec<Replication>,
}

pub const TABLE1_HEADER: &str = "n,bias_a0,ste_a0,bias_mu,ste_mu,bias_sigma,ste_sigma,\
median_err_a0,median_err_mu,median_err_sigma,succeeded,failed";

impl Table1Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TABLE1_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.n,
                r.bias_a0,
                r.ste_a0,
                r.bias_mu,
                r.ste_mu,
                r.bias_sigma,
                r.ste_sigma,
                r.median_err_a0,
                r.median_err_mu,
                r.median_err_sigma,
                r.succeeded,
                r.failed
            ));
        }
        out
    }
}

/// Spectral norm of the symmetric matrix `[[p, q], [q, r]]`.
pub fn sym2_norm(p: f64, q: f64, r: f64) -> f64 {
    let mid = 0.5 * (p + r);
    let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    (mid + rad).abs().max((mid - rad).abs())
}

fn sigma_error(t: &ThetaParams, truth: &ThetaParams) -> f64 {
    sym2_norm(t.s11 - truth.s11, t.s12 - truth.s12, t.s22 - truth.s22)
}

fn mean_abs(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x.abs()).sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::NAN;
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn inversions(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| w[1] > w[0]).count()
}

fn summarize(n: usize, reps: &[&Replication], truth: &ThetaParams) -> Table1Row {
    let fits: Vec<ThetaParams> = reps.iter().filter_map(|r| r.theta_hat).collect();
    let comp =
        |f: fn(&ThetaParams) -> f64| -> Vec<f64> { fits.iter().map(|t| f(t) - f(truth)).collect() };
    let (e_a0, e_mu) = (comp(|t| t.a0), comp(|t| t.mu));
    let (e11, e12, e22) = (comp(|t| t.s11), comp(|t| t.s12), comp(|t| t.s22));
    let est = |f: fn(&ThetaParams) -> f64| -> Vec<f64> { fits.iter().map(f).collect() };
    let sig_err: Vec<f64> = fits.iter().map(|t| sigma_error(t, truth)).collect();
    Table1Row {
        n,
        bias_a0: mean_abs(&e_a0),
        ste_a0: std_dev(&e_a0),
        bias_mu: mean_abs(&e_mu),
        ste_mu: std_dev(&e_mu),
        bias_sigma: sym2_norm(mean_abs(&e11), mean_abs(&e12), mean_abs(&e22)),
        ste_sigma: sym2_norm(
            std_dev(&est(|t| t.s11)),
            std_dev(&est(|t| t.s12)),
            std_dev(&est(|t| t.s22)),
        ),
        median_err_a0: median(&e_a0.iter().map(|x| x.abs()).collect::<Vec<_>>()),
        median_err_mu: median(&e_mu.iter().map(|x| x.abs()).collect::<Vec<_>>()),
        median_err_sigma: median(&sig_err),
        succeeded: fits.len(),
        failed: reps.len() - fits.len(),
    }
}

/// Simulates and fits `reps` samples at every size, in parallel. Failed fits
/// are kept as records with their error and excluded from the summaries.
pub fn run_table1(cfg: &ContrastConfig, settings: &Table1Settings) -> Result<Table1Report> {
    cfg.validate()?;
    settings.truth.validate()?;
    if settings.reps == 0 || settings.sizes.is_empty() {
        return Err(Error::Config(
            "table1 needs at least one size and one replication".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = settings
        .sizes
        .iter()
        .flat_map(|&n| (0..settings.reps).map(move |rep| (n, rep)))
        .collect();
    let replications: Vec<Replication> = jobs
        .par_iter()
        .map(|&(n, rep)| {
            let seed = replication_seed(cfg.seed, n, rep);
            let outcome = simulate(&settings.truth, n, seed).and_then(|s| estimate(&s, cfg));
            match outcome {
                Ok(e) => Replication {
                    n,
                    rep,
                    seed,
                    theta_hat: Some(e.theta_hat),
                    converged: e.converged,
                    error: None,
                },
                Err(e) => Replication {
                    n,
                    rep,
                    seed,
                    theta_hat: None,
                    converged: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let rows: Vec<Table1Row> = settings
        .sizes
        .iter()
        .map(|&n| {
            let reps: Vec<&Replication> = replications.iter().filter(|r| r.n == n).collect();
            summarize(n, &reps, &settings.truth)
        })
        .collect();
    let allowed = 1;
    let col =
        |f: fn(&Table1Row) -> f64| -> usize { inversions(&rows.iter().map(f).collect::<Vec<_>>()) };
    let (a, m, s) = (
        col(|r| r.median_err_a0),
        col(|r| r.median_err_mu),
        col(|r| r.median_err_sigma),
    );
    Ok(Table1Report {
        settings: settings.clone(),
        master_seed: cfg.seed,
        rows,
        trend: TrendCheck {
            a0_inversions: a,
            mu_inversions: m,
            sigma_inversions: s,
            allowed,
            pass: a <= allowed && m <= allowed && s <= allowed,
        },
        replications,
    })
}

/// Closed-form summaries of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSummary {
    pub mean_interval: Interval,
    pub variance: f64,
    pub eps_eta_correlation: f64,
    pub center_length_laws: CenterLengthLaws,
}

pub fn model_summary(theta: &ThetaParams) -> Result<ModelSummary> {
    Ok(ModelSummary {
        mean_interval: model_mean(theta)?,
        variance: model_variance(theta)?,
        eps_eta_correlation: theta.correlation(),
        center_length_laws: center_length_laws(theta)?,
    })
}

/// Kernel density and fitted normal density on a common grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityComparison {
    pub bandwidth: f64,
    /// `(x, kde, fitted)` rows.
    pub rows: Vec<(f64, f64, f64)>,
}

pub const DENSITY_HEADER: &str = "x,kde,fitted";

impl DensityComparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(DENSITY_HEADER);
        out.push('\n');
        for (x, k, f) in &self.rows {
            out.push_str(&format!("{x},{k},{f}\n"));
        }
        out
    }
}

pub const DENSITY_GRID_POINTS: usize = 200;

/// Compares the data's KDE against `N(mean, var)` on a grid spanning the
/// data range padded by three fitted standard deviations.
pub fn density_comparison(values: &[f64], mean: f64, var: f64) -> Result<DensityComparison> {
    let sd = var.sqrt();
    if !(sd > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * sd;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * sd;
    let grid = linspace(lo, hi, DENSITY_GRID_POINTS);
    let kde = kde_curve(values, &grid)?;
    let rows = kde
        .points
        .iter()
        .map(|&(x, k)| (x, k, norm_pdf((x - mean) / sd) / sd))
        .collect();
    Ok(DensityComparison {
        bandwidth: kde.bandwidth,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub fit: FitResult,
    pub summary: ModelSummary,
    /// Sample endpoint means, the moment baseline for the mean interval.
    pub moment_mean_interval: Interval,
    pub kde_bandwidth_rule: &'static str,
    pub center_bandwidth: f64,
    pub length_bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub center_density: DensityComparison,
    pub length_density: DensityComparison,
}

/// Builds the report for an existing fit.
pub fn analysis_from_fit(s: &IntervalSample, fit: FitResult) -> Result<Analysis> {
    let summary = model_summary(&fit.theta_hat)?;
    let laws = summary.center_length_laws;
    let centers: Vec<f64> = s.items().iter().map(Interval::center).collect();
    let lengths: Vec<f64> = s.items().iter().map(Interval::length).collect();
    let center_density = density_comparison(&centers, laws.center_mean, laws.center_var)?;
    let length_density = density_comparison(&lengths, laws.length_mean, laws.length_var)?;
    Ok(Analysis {
        report: AnalysisReport {
            moment_mean_interval: sample_aumann_mean(s)?,
            kde_bandwidth_rule: "silverman",
            center_bandwidth: center_density.bandwidth,
            length_bandwidth: length_density.bandwidth,
            fit,
            summary,
        },
        center_density,
        length_density,
    })
}

/// Fits the model and assembles the report and density tables.
pub fn analyze(s: &IntervalSample, cfg: &ContrastConfig) -> Result<Analysis> {
    let f = fit(s, cfg)?;
    analysis_from_fit(s, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta_hat_1() -> ThetaParams {
        ThetaParams::new(0.2495, 19.8573, 207.1454, -44.8547, 102.5263).unwrap()
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = replication_seed(7, 100, 0);
        assert_eq!(a, replication_seed(7, 100, 0));
        assert_ne!(a, replication_seed(7, 100, 1));
        assert_ne!(a, replication_seed(7, 200, 0));
        assert_ne!(a, replication_seed(8, 100, 0));
    }

    #[test]
    fn spectral_norm_of_2x2() {
        assert!((sym2_norm(3.0, 0.0, -5.0) - 5.0).abs() < 1e-15);
        assert!((sym2_norm(2.0, 1.0, 2.0) - 3.0).abs() < 1e-15);
        assert_eq!(sym2_norm(0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn helpers() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(inversions(&[5.0, 4.0, 4.5, 3.0, 3.1]), 2);
        assert!((std_dev(&[1.0, 2.0, 3.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn summary_at_reported_estimate() {
        let s = model_summary(&theta_hat_1()).unwrap();
        assert!((s.mean_interval.lower() - 4.8590).abs() < 5e-4);
        assert!((s.mean_interval.upper() - 24.9071).abs() < 5e-4);
        assert!((s.eps_eta_correlation + 0.3078).abs() < 5e-4);
    }

    #[test]
    fn moment_baseline_mean() {
        let s = IntervalSample::from_pairs(&[(0.0, 2.0), (2.0, 4.0)]).unwrap();
        assert_eq!(
            sample_aumann_mean(&s).unwrap(),
            Interval::new(1.0, 3.0).unwrap()
        );
    }

    #[test]
    fn density_table_shape() {
        let vals = [1.0, 2.0, 4.0, 7.0];
        let d = density_comparison(&vals, 3.5, 4.0).unwrap();
        assert_eq!(d.rows.len(), DENSITY_GRID_POINTS);
        assert!((d.rows[0].0 - (1.0 - 6.0)).abs() < 1e-12);
        assert!((d.rows[199].0 - (7.0 + 6.0)).abs() < 1e-12);
        assert!(d.rows.iter().all(|r| r.1 >= 0.0 && r.2 > 0.0));
        let csv = d.to_csv();
        assert!(csv.starts_with("x,kde,fitted\n"));
        assert_eq!(csv.lines().count(), 201);
    }

    #[test]
    fn small_table1_run() {
        let cfg = ContrastConfig {
            seed: 3,
            ..Default::default()
        };
        let settings = Table1Settings {
            sizes: vec![60, 120],
            reps: 2,
            ..Default::default()
        };
        let a = run_table1(&cfg, &settings).unwrap();
        assert_eq!(a.rows.len(), 2);
        assert_eq!(a.replications.len(), 4);
        assert!(a.rows.iter().all(|r| r.succeeded == 2 && r.failed == 0));
        assert_eq!(a, run_table1(&cfg, &settings).unwrap());
        assert!(a.to_csv().starts_with(TABLE1_HEADER));
    }
}
