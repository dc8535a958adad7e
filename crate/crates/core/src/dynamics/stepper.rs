use std::sync::Arc;

use super::nonlinear::{buoyancy_part, nonlinear_part};
use super::projection::leray_project;
use crate::basis::{Transformer, Truncation};
use crate::error::{Error, Result};
use crate::fields::{Alpha, FlowState};
use crate::linear::{eigen_table, ModeEigenSystem, PropagatorTable};

/// Shared machinery for advancing states on one truncation.
#[derive(Debug)]
pub struct Dynamics {
    tr: Transformer,
    alpha: Alpha,
    eig: Vec<ModeEigenSystem>,
    nonlinear: bool,
    cfl: f64,
    cache: Vec<Arc<PropagatorTable>>,
}

const CACHE_LEN: usize = 6;

impl Dynamics {
    pub fn new(trunc: Truncation, alpha: Alpha) -> Result<Self> {
        Ok(Self {
            tr: Transformer::new(trunc),
            alpha,
            eig: eigen_table(&trunc, alpha)?,
            nonlinear: true,
            cfl: 0.5,
            cache: Vec::new(),
        })
    }

    /// Drops the advective terms (the step becomes the exact linear flow).
    pub fn with_nonlinear(mut self, on: bool) -> Self {
        self.nonlinear = on;
        self
    }

    pub fn with_cfl(mut self, c: f64) -> Self {
        self.cfl = c;
        self
    }

    pub fn transformer(&self) -> &Transformer {
        &self.tr
    }

    pub fn trunc(&self) -> &Truncation {
        self.tr.trunc()
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn eigen(&self) -> &[ModeEigenSystem] {
        &self.eig
    }

    pub fn is_nonlinear(&self) -> bool {
        self.nonlinear
    }

    /// Exact linear propagator over `t` (cached; negative `t` inverts).
    pub fn propagator(&mut self, t: f64) -> Result<Arc<PropagatorTable>> {
        if let Some(p) = self.cache.iter().find(|p| p.time() == t) {
            return Ok(p.clone());
        }
        let p = Arc::new(PropagatorTable::from_eigen_table(*self.trunc(), &self.eig, t)?);
        if self.cache.len() == CACHE_LEN {
            self.cache.remove(0);
        }
        self.cache.push(p.clone());
        Ok(p)
    }

    /// Projected advective tendency, or zero when nonlinearity is off.
    pub fn nonlinear_tendency(&self, state: &FlowState) -> Result<FlowState> {
        if self.nonlinear {
            nonlinear_part(&self.tr, state)
        } else {
            Ok(FlowState::zeros(*self.trunc(), self.alpha))
        }
    }

    /// Advective step limit `cfl / (max|eta| * sum |v coeffs|)`.
    pub fn dt_limit(&self, state: &FlowState) -> f64 {
        if !self.nonlinear {
            return f64::INFINITY;
        }
        let v = state.velocity_l1();
        if v == 0.0 {
            f64::INFINITY
        } else {
            self.cfl / (self.trunc().max_eta() * v)
        }
    }

    /// Restores the divergence-free and reality constraints.
    pub fn reproject(&self, state: &mut FlowState) -> Result<()> {
        let (v_h, v_d) = leray_project(&state.v_h, &state.v_d)?;
        state.v_h = v_h;
        state.v_d = v_d;
        state.symmetrize();
        Ok(())
    }

    /// One step of `stepper`, with step-size check and re-projection.
    pub fn step(&mut self, stepper: &dyn Stepper, state: &FlowState, dt: f64) -> Result<FlowState> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        let limit = self.dt_limit(state);
        if dt > limit {
            return Err(Error::StepSize { dt, limit });
        }
        let mut next = stepper.advance(self, state, dt)?;
        self.reproject(&mut next)?;
        next.t = state.t + dt;
        Ok(next)
    }

    /// Applies the exact inverse of the linear flow over `dt`.
    pub fn inverse_linear(&mut self, state: &FlowState, dt: f64) -> Result<FlowState> {
        self.propagator(-dt)?.apply(state)
    }

    /// Dissipation-only flow: `v -> e^{-|eta|^{2 alpha} t} v`, `theta` fixed.
    fn dissipate(&self, state: &FlowState, t: f64) -> FlowState {
        let alpha = self.alpha;
        let mut out = state.clone();
        for f in out.v_h.iter_mut().chain([&mut out.v_d]) {
            *f = f.map_modes(|m, c| (-alpha.dissipation(m.eta_sq()) * t).exp() * c);
        }
        out
    }
}

/// A time integration scheme selectable by name.
pub trait Stepper: Send + Sync {
    fn name(&self) -> &'static str;
    /// Formal order of accuracy.
    fn order(&self) -> u32;
    /// Unchecked step; [`Dynamics::step`] wraps this with validation.
    fn advance(&self, dynamics: &mut Dynamics, state: &FlowState, dt: f64) -> Result<FlowState>;
}

/// Integrating factor with explicit midpoint on the advective terms.
#[derive(Debug, Default, Clone, Copy)]
pub struct IfMidpoint;

impl Stepper for IfMidpoint {
    fn name(&self) -> &'static str {
        "if-midpoint"
    }

    fn order(&self) -> u32 {
        2
    }

    fn advance(&self, dy: &mut Dynamics, u: &FlowState, dt: f64) -> Result<FlowState> {
        let full = dy.propagator(dt)?;
        let half = dy.propagator(0.5 * dt)?;
        let mut next = full.apply(u)?;
        if !dy.is_nonlinear() {
            return Ok(next);
        }
        let n0 = dy.nonlinear_tendency(u)?;
        let mut mid = u.clone();
        mid.axpy(0.5 * dt, &n0)?;
        let mid = half.apply(&mid)?;
        let n1 = dy.nonlinear_tendency(&mid)?;
        next.axpy(dt, &half.apply(&n1)?)?;
        Ok(next)
    }
}

/// Integrating-factor forward Euler; first order, for comparison.
#[derive(Debug, Default, Clone, Copy)]
pub struct IfEuler;

impl Stepper for IfEuler {
    fn name(&self) -> &'static str {
        "if-euler"
    }

    fn order(&self) -> u32 {
        1
    }

    fn advance(&self, dy: &mut Dynamics, u: &FlowState, dt: f64) -> Result<FlowState> {
        let full = dy.propagator(dt)?;
        let mut w = u.clone();
        w.axpy(dt, &dy.nonlinear_tendency(u)?)?;
        full.apply(&w)
    }
}

/// Midpoint scheme with the buoyancy coupling moved to the explicit side;
/// only dissipation is integrated exactly.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExplicitBuoyancy;

impl ExplicitBuoyancy {
    fn rhs(dy: &Dynamics, u: &FlowState) -> Result<FlowState> {
        let mut f = buoyancy_part(u)?;
        f.axpy(1.0, &dy.nonlinear_tendency(u)?)?;
        Ok(f)
    }
}

impl Stepper for ExplicitBuoyancy {
    fn name(&self) -> &'static str {
        "explicit-buoyancy"
    }

    fn order(&self) -> u32 {
        2
    }

    fn advance(&self, dy: &mut Dynamics, u: &FlowState, dt: f64) -> Result<FlowState> {
        let f0 = Self::rhs(dy, u)?;
        let mut mid = u.clone();
        mid.axpy(0.5 * dt, &f0)?;
        let mid = dy.dissipate(&mid, 0.5 * dt);
        let f1 = Self::rhs(dy, &mid)?;
        let mut next = dy.dissipate(u, dt);
        next.axpy(dt, &dy.dissipate(&f1, 0.5 * dt))?;
        Ok(next)
    }
}

pub const STEPPER_NAMES: &[&str] = &["if-midpoint", "if-euler", "explicit-buoyancy"];

/// Looks up a stepper by its registered name.
pub fn stepper_by_name(name: &str) -> Result<Arc<dyn Stepper>> {
    match name {
        "if-midpoint" => Ok(Arc::new(IfMidpoint)),
        "if-euler" => Ok(Arc::new(IfEuler)),
        "explicit-buoyancy" => Ok(Arc::new(ExplicitBuoyancy)),
        _ => Err(Error::Config(format!(
            "unknown stepper '{name}' (known: {})",
            STEPPER_NAMES.join(", ")
        ))),
    }
}
