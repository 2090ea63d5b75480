//! Normal hierarchical model for random intervals and its minimum contrast
//! estimator.
//!
//! A random interval is modelled as `A = ε + η·[a0, a0 + 1]` with `(ε, η)`
//! jointly normal, `Eε = 0`. Parameters are fitted by minimizing the weighted
//! squared distance between the model hitting function `T(K) = P(K ∩ A ≠ ∅)`
//! and its empirical counterpart over a region of test intervals.

// Negated comparisons reject NaN on purpose; index loops over 5-vectors read
// closer to the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod contrast;
pub mod empirical;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod gaussian;
pub mod interval;
pub mod io;
pub mod model;
pub mod quadrature;

pub use config::{ContrastConfig, RegionSpec, XiMethod};
pub use contrast::{
    contrast_h, limiting_n, make_rule, QuadNode, QuadratureRule, RegionS, WeightFn,
};
pub use empirical::{
    build_hit_cache, empirical_hitting, kde_curve, moment_init, DensityCurve, HitCountCache,
};
pub use error::{Error, Result};
pub use estimator::sandwich::{
    grad_t, joint_hitting_prob, matrix_c, matrix_xi, sandwich, score_covariance, Mat5, Sandwich,
};
pub use estimator::{asymptotic_covariance, estimate, fit, Estimate, FitDiagnostics, FitResult};
pub use experiments::{
    analysis_from_fit, analyze, model_summary, run_table1, Analysis, AnalysisReport,
    DensityComparison, ModelSummary, Table1Report, Table1Row, Table1Settings,
};
pub use gaussian::{affine_bvn_cdf, bvn_cdf, std_normal_cdf, trunc_moments, BvnSpec, TruncMoments};
pub use interval::{hits, scale_add, Interval, IntervalSample, Provenance};
pub use model::{
    center_length_laws, hitting_approx, hitting_conditional, hitting_exact, model_mean,
    model_variance, simulate, CenterLengthLaws, Formula, HittingFunction, HittingMode,
    HittingOptions, ThetaParams,
};
