use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{CharApprox, SimplexSpec};
use crate::model::{
    black_scholes, expand_hermite, expand_taylor, expand_time_taylor, heston_jump,
    heston_mean_trajectory, local_vol_jump, merton, ExpandedModel, HestonJumpParams, ModelSpec,
};
use crate::oracle::{heston_jump_cf_with, merton_cf, CfSettings};
use crate::pricer::{OptionKind, QuadratureSpec};

/// Closed-form characteristic function `(ξ₁, state) ↦ P̂(t, state, T, ξ₁)`.
pub type ExactCf = Box<dyn Fn(Complex64, &[f64]) -> Result<Complex64> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    HestonJump(HestonJumpParams),
    BlackScholes {
        sigma: f64,
        #[serde(default)]
        x0: f64,
    },
    Merton {
        sigma: f64,
        intensity: f64,
        jump_mean: f64,
        jump_std: f64,
        #[serde(default)]
        x0: f64,
    },
    /// `σ²(x) = variance[0] + variance[1] x`, jump rate `intensity[0] + intensity[1] x`.
    LocalVolJump {
        variance: [f64; 2],
        intensity: [f64; 2],
        jump_mean: f64,
        jump_std: f64,
        #[serde(default)]
        x0: f64,
    },
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig::HestonJump(HestonJumpParams::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Taylor,
    TimeTaylor,
    Hermite,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HermiteConfig {
    /// Gaussian weight variance per state axis; scaled by `T − t` when absent.
    pub variance: Option<Vec<f64>>,
    /// Gauss–Hermite nodes per axis; `order + 3` when absent.
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub contour_im: f64,
    pub panel_nodes: usize,
    pub max_panel_width: f64,
    pub half_width: Option<f64>,
    pub truncation_tol: f64,
    /// Gauss–Legendre nodes per time axis for time-dependent models.
    pub time_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        let s = SimplexSpec::default();
        QuadratureConfig {
            contour_im: q.shift,
            panel_nodes: q.panel_nodes,
            max_panel_width: q.max_panel_width,
            half_width: q.half_width,
            truncation_tol: q.truncation_tol,
            time_nodes: s.nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmileConfig {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Default for SmileConfig {
    fn default() -> Self {
        SmileConfig {
            from: -0.3,
            to: 0.3,
            points: 61,
        }
    }
}

/// Everything a run needs. Missing keys take their defaults; unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub scheme: Scheme,
    pub order: usize,
    pub hermite: HermiteConfig,
    pub payoff: OptionKind,
    /// Valuation time `t`.
    pub t: f64,
    /// Maturities `T`.
    pub maturities: Vec<f64>,
    /// Log-strike offsets `k − x` for `price` and `iv-table`.
    pub strike_offsets: Vec<f64>,
    /// Log-spots `x` for `greeks-table`.
    pub spots: Vec<f64>,
    /// Log-strike for `greeks-table`.
    pub greeks_strike: f64,
    pub smile: SmileConfig,
    pub quadrature: QuadratureConfig,
    pub out: Option<String>,
}

fn grid() -> Vec<f64> {
    (0..9)
        .map(|i| ((-0.2 + 0.05 * i as f64) * 100.0).round() / 100.0)
        .collect()
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelConfig::default(),
            scheme: Scheme::Taylor,
            order: 2,
            hermite: HermiteConfig::default(),
            payoff: OptionKind::Call,
            t: 0.0,
            maturities: vec![0.1, 0.25, 0.5, 1.0],
            strike_offsets: grid(),
            spots: grid(),
            greeks_strike: 0.0,
            smile: SmileConfig::default(),
            quadrature: QuadratureConfig::default(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        self.model_spec()?;
        if !self.t.is_finite() {
            return Err(Error::Config("t must be finite".into()));
        }
        if self.maturities.is_empty() {
            return Err(Error::Config("maturities must not be empty".into()));
        }
        if let Some(&bad) = self
            .maturities
            .iter()
            .find(|&&m| !(m > self.t) || !m.is_finite())
        {
            return Err(Error::Config(format!(
                "maturity {bad} must exceed t = {}",
                self.t
            )));
        }
        for (name, v) in [
            ("strike_offsets", &self.strike_offsets),
            ("spots", &self.spots),
        ] {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if self.smile.points < 2 || !(self.smile.to > self.smile.from) {
            return Err(Error::Config("smile needs points ≥ 2 and to > from".into()));
        }
        if self.quadrature.panel_nodes == 0 || self.quadrature.time_nodes == 0 {
            return Err(Error::Config(
                "quadrature node counts must be positive".into(),
            ));
        }
        if let Some(v) = &self.hermite.variance {
            if v.len() != self.dim() {
                return Err(Error::Dimension {
                    expected: self.dim(),
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self.model {
            ModelConfig::HestonJump(_) => 2,
            _ => 1,
        }
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        match &self.model {
            ModelConfig::HestonJump(p) => heston_jump(p),
            ModelConfig::BlackScholes { sigma, .. } => black_scholes(*sigma),
            ModelConfig::Merton {
                sigma,
                intensity,
                jump_mean,
                jump_std,
                ..
            } => merton(*sigma, *intensity, *jump_mean, *jump_std),
            ModelConfig::LocalVolJump {
                variance,
                intensity,
                jump_mean,
                jump_std,
                ..
            } => local_vol_jump(
                (variance[0], variance[1]),
                (intensity[0], intensity[1]),
                *jump_mean,
                *jump_std,
            ),
        }
    }

    /// Initial state with the log-price replaced by `x`.
    pub fn state(&self, x: f64) -> Vec<f64> {
        match &self.model {
            ModelConfig::HestonJump(p) => vec![x, p.z0],
            _ => vec![x],
        }
    }

    pub fn spot(&self) -> f64 {
        match &self.model {
            ModelConfig::HestonJump(p) => p.x0,
            ModelConfig::BlackScholes { x0, .. }
            | ModelConfig::Merton { x0, .. }
            | ModelConfig::LocalVolJump { x0, .. } => *x0,
        }
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        let q = &self.quadrature;
        QuadratureSpec {
            shift: q.contour_im,
            half_width: q.half_width,
            panel_nodes: q.panel_nodes,
            max_panel_width: q.max_panel_width,
            truncation_tol: q.truncation_tol,
            ..QuadratureSpec::default()
        }
    }

    pub fn simplex_spec(&self) -> SimplexSpec {
        SimplexSpec {
            nodes: self.quadrature.time_nodes,
            ..SimplexSpec::default()
        }
    }

    /// Expansion of the configured model about `state` for maturity `horizon`.
    pub fn expanded(&self, state: &[f64], horizon: f64) -> Result<ExpandedModel> {
        let spec = self.model_spec()?;
        let n = self.order;
        match self.scheme {
            Scheme::Taylor => expand_taylor(&spec, n, state),
            Scheme::TimeTaylor => {
                let traj = match &self.model {
                    ModelConfig::HestonJump(p) => heston_mean_trajectory(&HestonJumpParams {
                        x0: state[0],
                        z0: state[1],
                        ..*p
                    }),
                    _ => {
                        let s = state.to_vec();
                        std::sync::Arc::new(move |_| s.clone())
                    }
                };
                expand_time_taylor(&spec, n, traj)
            }
            Scheme::Hermite => {
                let tau = horizon - self.t;
                let variance = match &self.hermite.variance {
                    Some(v) => v.clone(),
                    None => self.default_hermite_variance(state, tau),
                };
                expand_hermite(
                    &spec,
                    n,
                    state,
                    &variance,
                    self.hermite.nodes.unwrap_or(n + 3),
                )
            }
        }
    }

    fn default_hermite_variance(&self, state: &[f64], tau: f64) -> Vec<f64> {
        match &self.model {
            ModelConfig::HestonJump(p) => vec![state[1] * tau, p.delta * p.delta * state[1] * tau],
            ModelConfig::BlackScholes { sigma, .. } | ModelConfig::Merton { sigma, .. } => {
                vec![sigma * sigma * tau]
            }
            ModelConfig::LocalVolJump { variance, .. } => {
                vec![(variance[0] + variance[1] * state[0]).abs().max(1e-4) * tau]
            }
        }
    }

    pub fn approximation(&self, state: &[f64], horizon: f64) -> Result<CharApprox> {
        let em = self.expanded(state, horizon)?;
        CharApprox::new(&em, self.t, horizon, self.simplex_spec())
    }

    /// Closed-form characteristic function of the configured model, if known.
    pub fn exact_cf(&self, horizon: f64, cfg: CfSettings) -> Result<ExactCf> {
        let t = self.t;
        match self.model.clone() {
            ModelConfig::HestonJump(p) => Ok(Box::new(move |xi, s: &[f64]| {
                heston_jump_cf_with(&p, t, s[0], s[1], horizon, xi, &cfg)
            })),
            ModelConfig::BlackScholes { sigma, .. } => Ok(Box::new(move |xi, s: &[f64]| {
                merton_cf(sigma, 0.0, 0.0, 0.0, t, s[0], horizon, xi)
            })),
            ModelConfig::Merton {
                sigma,
                intensity,
                jump_mean,
                jump_std,
                ..
            } => Ok(Box::new(move |xi, s: &[f64]| {
                merton_cf(sigma, intensity, jump_mean, jump_std, t, s[0], horizon, xi)
            })),
            ModelConfig::LocalVolJump { .. } => Err(Error::Config(
                "no closed-form reference is available for local_vol_jump".into(),
            )),
        }
    }
}
