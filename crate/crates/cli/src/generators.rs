//! Initial-data generators, selected by name.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use strata_core::basis::{BasisKind, ModeIndex, SpectralField, Truncation};
use strata_core::diagnostics::energy_e;
use strata_core::dynamics::leray_project;
use strata_core::fields::{validate_state, Alpha, FlowState, StateSnapshot};
use strata_core::linear::{classify_region, Region};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::registry::Registry;

pub trait InitialData: Send + Sync {
    fn name(&self) -> &'static str;
    fn generate(&self, cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Result<FlowState>;
}

pub fn generators() -> Registry<dyn InitialData> {
    let mut r: Registry<dyn InitialData> = Registry::new("initial-data generator");
    let all: [Arc<dyn InitialData>; 4] = [
        Arc::new(Sharpness),
        Arc::new(RandomSmooth),
        Arc::new(MeanVelocity),
        Arc::new(Snapshot),
    ];
    for g in all {
        r.register(g.name(), g);
    }
    r
}

/// Minimum number of modes the sharpness data must occupy.
pub const SHARPNESS_MIN_MODES: usize = 32;

/// `v_0 = 0`, `theta_0 = q^{-(m + 1/2 + eps)}` on `D_3 & {|n| = 1}`.
pub fn sharpness_data(m: f64, eps: f64, alpha: Alpha, trunc: Truncation) -> Result<FlowState> {
    if !(eps > 0.0) {
        return Err(CliError::Config(format!("epsilon must be positive, got {eps}")));
    }
    let mut state = FlowState::zeros(trunc, alpha);
    let mut count = 0;
    for i in 0..trunc.mode_count(BasisKind::B) {
        let mode = trunc.mode(BasisKind::B, i);
        let unit = mode.n().iter().map(|n| n.unsigned_abs()).sum::<u64>() == 1;
        if unit && classify_region(&mode, alpha)? == Region::D3 {
            let c = (mode.q() as f64).powf(-(m + 0.5 + eps));
            state.theta.coeffs_mut()[i] = Complex64::new(c, 0.0);
            count += 1;
        }
    }
    if count < SHARPNESS_MIN_MODES {
        return Err(CliError::Config(format!(
            "only {count} modes of D3 with |n| = 1 fit in the truncation; need {SHARPNESS_MIN_MODES}"
        )));
    }
    Ok(state)
}

struct Sharpness;

impl InitialData for Sharpness {
    fn name(&self) -> &'static str {
        "sharpness"
    }

    fn generate(&self, cfg: &ScenarioConfig, _rng: &mut ChaCha8Rng) -> Result<FlowState> {
        let s = sharpness_data(cfg.m, cfg.initial.epsilon, cfg.alpha, cfg.trunc()?)?;
        rescale(s, cfg)
    }
}

struct RandomSmooth;

impl InitialData for RandomSmooth {
    fn name(&self) -> &'static str {
        "random-smooth"
    }

    fn generate(&self, cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Result<FlowState> {
        rescale(random_smooth(cfg, rng)?, cfg)
    }
}

/// Random smooth data plus a horizontal-mean velocity profile
/// `U (c_0 + c_1 / 2)` in the first horizontal component.
struct MeanVelocity;

impl InitialData for MeanVelocity {
    fn name(&self) -> &'static str {
        "mean-velocity"
    }

    fn generate(&self, cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Result<FlowState> {
        let mut s = rescale(random_smooth(cfg, rng)?, cfg)?;
        let u = cfg.initial.mean_velocity;
        let zero = vec![0i64; s.d() - 1];
        s.v_h[0].set(&ModeIndex::new(&zero, 0)?, Complex64::new(u, 0.0))?;
        s.v_h[0].set(&ModeIndex::new(&zero, 1)?, Complex64::new(0.5 * u, 0.0))?;
        Ok(s)
    }
}

struct Snapshot;

impl InitialData for Snapshot {
    fn name(&self) -> &'static str {
        "snapshot"
    }

    fn generate(&self, cfg: &ScenarioConfig, _rng: &mut ChaCha8Rng) -> Result<FlowState> {
        let path = cfg
            .initial
            .snapshot
            .as_ref()
            .ok_or_else(|| CliError::Config("generator 'snapshot' needs initial.snapshot".into()))?;
        let mut s = StateSnapshot::load(path)?.into_state()?;
        if s.alpha != cfg.alpha || *s.trunc() != cfg.trunc()? {
            return Err(CliError::Config(format!(
                "snapshot {} does not match the configured alpha/truncation",
                path.display()
            )));
        }
        s.t = 0.0;
        let report = validate_state(&s);
        if !report.passed() {
            return Err(CliError::Config(format!(
                "snapshot fails validation: {:?}",
                report.failures()
            )));
        }
        rescale(s, cfg)
    }
}

fn random_smooth(cfg: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Result<FlowState> {
    let trunc = cfg.trunc()?;
    let ic = &cfg.initial;
    let mut field = |kind| {
        let mut f = SpectralField::zeros(kind, trunc);
        for i in 0..trunc.mode_count(kind) {
            let m = trunc.mode(kind, i);
            let inside = m.n().iter().all(|&n| n.unsigned_abs() as usize <= ic.n_lim)
                && m.q() as usize <= ic.q_lim;
            if inside {
                let w = (1.0 + m.eta_sq()).powf(-ic.smoothness / 2.0);
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                f.coeffs_mut()[i] = w * Complex64::new(re, im);
            }
        }
        f.symmetrize();
        f
    };
    let v_h: Vec<SpectralField> = (0..trunc.horizontal_dims()).map(|_| field(BasisKind::C)).collect();
    let v_d = field(BasisKind::B);
    let theta = field(BasisKind::B);
    let (v_h, v_d) = leray_project(&v_h, &v_d)?;
    let mut s = FlowState::new(v_h, v_d, theta, cfg.alpha)?;
    s.symmetrize();
    Ok(s)
}

fn rescale(state: FlowState, cfg: &ScenarioConfig) -> Result<FlowState> {
    match cfg.initial.delta {
        None => Ok(state),
        Some(delta) => {
            let e = energy_e(&state, cfg.m)?;
            if e == 0.0 {
                return Err(CliError::Config("cannot rescale zero initial data".into()));
            }
            Ok(state.scaled(delta / e))
        }
    }
}
