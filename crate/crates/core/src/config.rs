//! Run configuration for fitting: region, quadrature orders, weight, hitting
//! formula and optimizer tolerances. Stored as flat TOML.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contrast::{RegionS, WeightFn};
use crate::error::{Error, Result};
use crate::estimator::nelder_mead::NelderMeadOptions;
use crate::estimator::sandwich::DEFAULT_GRAD_STEP;
use crate::interval::IntervalSample;
use crate::model::{HittingMode, HittingOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoRegion {
    Auto,
}

/// Either the data-driven rule of thumb or explicit
/// `[x_min, x_max, y_min, y_max]` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSpec {
    Auto(AutoRegion),
    Bounds([f64; 4]),
}

impl RegionSpec {
    pub fn bounds(r: &RegionS) -> Self {
        Self::Bounds([r.x_min, r.x_max, r.y_min, r.y_max])
    }
}

impl Default for RegionSpec {
    fn default() -> Self {
        Self::Auto(AutoRegion::Auto)
    }
}

/// How the Ξ factor of the sandwich covariance is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum XiMethod {
    /// Tensor-square quadrature on the reduced `xi_order` rule.
    #[default]
    Quadrature,
    /// Covariance of simulated per-observation scores on the main rule.
    Montecarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContrastConfig {
    pub region: RegionSpec,
    pub order_x: usize,
    pub order_y: usize,
    pub xi_order: usize,
    pub weight_c: f64,
    pub hitting_mode: HittingMode,
    pub neglect_threshold: f64,
    pub max_iter: usize,
    pub diam_tol: f64,
    pub fspread_tol: f64,
    pub seed: u64,
    pub xi_method: XiMethod,
    pub xi_mc_draws: usize,
    pub grad_step: f64,
    pub allow_pinv: bool,
}

impl Default for ContrastConfig {
    fn default() -> Self {
        let nm = NelderMeadOptions::default();
        Self {
            region: RegionSpec::default(),
            order_x: 24,
            order_y: 24,
            xi_order: 12,
            weight_c: 1.0,
            hitting_mode: HittingMode::Auto,
            neglect_threshold: 1e-8,
            max_iter: nm.max_iter,
            diam_tol: nm.diam_tol,
            fspread_tol: nm.fspread_tol,
            seed: 0,
            xi_method: XiMethod::Quadrature,
            xi_mc_draws: 100_000,
            grad_step: DEFAULT_GRAD_STEP,
            allow_pinv: true,
        }
    }
}

impl ContrastConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for (name, o) in [
            ("order_x", self.order_x),
            ("order_y", self.order_y),
            ("xi_order", self.xi_order),
        ] {
            if o < 2 {
                return bad(format!("{name} must be at least 2, got {o}"));
            }
        }
        if !(self.weight_c > 0.0 && self.weight_c.is_finite()) {
            return bad(format!("weight_c must be positive, got {}", self.weight_c));
        }
        if !(self.neglect_threshold > 0.0 && self.neglect_threshold < 1.0) {
            return bad(format!(
                "neglect_threshold must lie in (0, 1), got {}",
                self.neglect_threshold
            ));
        }
        for (name, v) in [
            ("diam_tol", self.diam_tol),
            ("fspread_tol", self.fspread_tol),
            ("grad_step", self.grad_step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        if self.xi_mc_draws < 2 {
            return bad(format!(
                "xi_mc_draws must be at least 2, got {}",
                self.xi_mc_draws
            ));
        }
        if let RegionSpec::Bounds([a, b, c, d]) = self.region {
            RegionS::new(a, b, c, d).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn hitting_options(&self) -> HittingOptions {
        HittingOptions {
            mode: self.hitting_mode,
            neglect_threshold: self.neglect_threshold,
        }
    }

    pub fn weight(&self) -> Result<WeightFn> {
        WeightFn::constant(self.weight_c)
    }

    pub fn optimizer(&self) -> NelderMeadOptions {
        NelderMeadOptions {
            max_iter: self.max_iter,
            diam_tol: self.diam_tol,
            fspread_tol: self.fspread_tol,
        }
    }

    /// The concrete region for `sample`.
    pub fn resolve_region(&self, sample: &IntervalSample) -> Result<RegionS> {
        match self.region {
            RegionSpec::Auto(_) => RegionS::from_sample(sample),
            RegionSpec::Bounds([a, b, c, d]) => RegionS::new(a, b, c, d),
        }
    }
}
