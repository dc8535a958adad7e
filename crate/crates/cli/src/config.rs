//! Scenario configuration, read from TOML.
//!
//! ```toml
//! scenario = "linear_sharpness"
//! d = 2
//! alpha = 0
//! m = 4.0
//! t_final = 1000.0
//! samples = 64
//! seed = 0
//!
//! [truncation]
//! n_max = 1
//! q_max = 16384
//!
//! [time]
//! stepper = "if-midpoint"
//! dt = 0.05          # optional; otherwise CFL-limited
//! cfl = 0.5
//!
//! [initial]
//! generator = "sharpness"
//! epsilon = 0.1
//!
//! [diagnostics]
//! s = [0.0, 1.0, 2.0, 4.0]
//! fit_window = [100.0, 1000.0]   # default [t_final / 10, t_final]
//!
//! [output]
//! dir = "out"
//! plots = true
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use strata_core::basis::Truncation;
use strata_core::fields::Alpha;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default = "default_d")]
    pub d: usize,
    pub alpha: Alpha,
    pub m: f64,
    pub truncation: TruncationConfig,
    pub t_final: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub n_max: usize,
    pub q_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default = "default_stepper")]
    pub stepper: String,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Upper bound on the step when `dt` is not given.
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            stepper: default_stepper(),
            dt: None,
            cfl: default_cfl(),
            dt_max: default_dt_max(),
        }
    }
}

/// Named generator plus its parameters. Unused parameters are ignored by
/// generators that do not read them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Rescale so that `||(v_0, theta_0)||_{H^m} = delta`.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default = "default_band")]
    pub n_lim: usize,
    #[serde(default = "default_band")]
    pub q_lim: usize,
    /// Coefficient decay `(1 + |eta|^2)^{-smoothness / 2}` of random data.
    #[serde(default = "default_smoothness")]
    pub smoothness: f64,
    /// Amplitude of the horizontal-mean velocity profile.
    #[serde(default = "default_mean_velocity")]
    pub mean_velocity: f64,
    #[serde(default)]
    pub snapshot: Option<PathBuf>,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            generator: None,
            epsilon: default_epsilon(),
            delta: None,
            n_lim: default_band(),
            q_lim: default_band(),
            smoothness: default_smoothness(),
            mean_velocity: default_mean_velocity(),
            snapshot: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
    #[serde(default)]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    /// Also integrate the linear flow from the same data and record the
    /// `H^m` distance to it.
    #[serde(default)]
    pub compare_linear: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            s: default_s(),
            fit_window: None,
            tail_tol: default_tail_tol(),
            compare_linear: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_true")]
    pub plots: bool,
    #[serde(default)]
    pub checkpoint: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            plots: true,
            checkpoint: false,
        }
    }
}

fn default_d() -> usize {
    2
}
fn default_samples() -> usize {
    64
}
fn default_stepper() -> String {
    "if-midpoint".into()
}
fn default_cfl() -> f64 {
    0.5
}
fn default_dt_max() -> f64 {
    0.05
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_band() -> usize {
    4
}
fn default_smoothness() -> f64 {
    8.0
}
fn default_mean_velocity() -> f64 {
    1.0
}
fn default_s() -> Vec<f64> {
    vec![0.0]
}
fn default_tail_tol() -> f64 {
    1e-8
}
fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_true() -> bool {
    true
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        // Relative snapshot paths are resolved against the config file.
        if let (Some(snap), Some(parent)) = (&cfg.initial.snapshot, path.parent()) {
            if snap.is_relative() {
                cfg.initial.snapshot = Some(parent.join(snap));
            }
        }
        Ok(cfg)
    }

    /// Smallest admissible `m` for the chosen `alpha` and `d` (strict bound).
    pub fn m_threshold(&self) -> f64 {
        let half_d = self.d as f64 / 2.0;
        match self.alpha {
            Alpha::Zero => 2.0 + half_d,
            Alpha::One => 3.0 + half_d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |s: String| Err(CliError::Config(s));
        if !(2..=3).contains(&self.d) {
            return err(format!("d must be 2 or 3, got {}", self.d));
        }
        if !(self.m > self.m_threshold()) {
            return err(format!(
                "m = {} must exceed {} for alpha = {} and d = {}",
                self.m,
                self.m_threshold(),
                self.alpha,
                self.d
            ));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return err(format!("t_final must be positive, got {}", self.t_final));
        }
        if self.samples < 8 {
            return err(format!("need at least 8 samples, got {}", self.samples));
        }
        if let Some(dt) = self.time.dt {
            if !(dt > 0.0) {
                return err(format!("dt must be positive, got {dt}"));
            }
        }
        if !(self.time.cfl > 0.0) || !(self.time.dt_max > 0.0) {
            return err("cfl and dt_max must be positive".into());
        }
        if let Some(delta) = self.initial.delta {
            if !(delta > 0.0) {
                return err(format!("delta must be positive, got {delta}"));
            }
        }
        if self.diagnostics.s.iter().any(|&s| s < 0.0 || s > self.m) {
            return err(format!("every s must lie in [0, m], got {:?}", self.diagnostics.s));
        }
        if let Some([a, b]) = self.diagnostics.fit_window {
            if !(a >= 0.0 && b > a) {
                return err(format!("bad fit window [{a}, {b}]"));
            }
        }
        self.trunc()?;
        Ok(())
    }

    pub fn trunc(&self) -> Result<Truncation> {
        Truncation::new(self.d, self.truncation.n_max, self.truncation.q_max)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn fit_window(&self) -> (f64, f64) {
        match self.diagnostics.fit_window {
            Some([a, b]) => (a, b),
            None => (self.t_final / 10.0, self.t_final),
        }
    }

    /// Sample times `t_k = (1 + T)^{k / (K - 1)} - 1`, `k = 0..K`.
    pub fn sample_times(&self) -> Vec<f64> {
        let k = self.samples;
        let top = (1.0 + self.t_final).ln();
        let mut ts: Vec<f64> = (0..k)
            .map(|i| (top * i as f64 / (k - 1) as f64).exp_m1())
            .collect();
        ts[0] = 0.0;
        ts[k - 1] = self.t_final;
        ts
    }
}
