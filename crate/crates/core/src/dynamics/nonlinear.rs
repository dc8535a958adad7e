use super::projection::leray_project;
use crate::basis::{derivative, Axis, BasisKind, PhysicalGrid, SpectralField, Transformer};
use crate::error::Result;
use crate::fields::FlowState;

/// Advective terms `(v.grad) v_h`, `(v.grad) v_d`, `(v.grad) theta`.
#[derive(Debug, Clone)]
pub struct Advection {
    pub v_h: Vec<SpectralField>,
    pub v_d: SpectralField,
    pub theta: SpectralField,
}

/// `(v.grad) f` on the grid, for `f` of either family.
fn transport(
    tr: &Transformer,
    vel_h: &[PhysicalGrid],
    vel_d: &PhysicalGrid,
    f: &SpectralField,
) -> Result<SpectralField> {
    let trunc = *tr.trunc();
    let mut acc = PhysicalGrid::zeros(trunc);
    for (k, vk) in vel_h.iter().enumerate() {
        let df = tr.inverse(&derivative(f, Axis::Horizontal(k))?)?;
        acc.add_product(vk, &df);
    }
    let df = tr.inverse(&derivative(f, Axis::Vertical)?)?;
    acc.add_product(vel_d, &df);
    tr.forward(&acc, f.kind())
}

/// Dealiased advective terms of a state.
pub fn advection(tr: &Transformer, state: &FlowState) -> Result<Advection> {
    let vel_h = state
        .v_h
        .iter()
        .map(|f| tr.inverse(f))
        .collect::<Result<Vec<_>>>()?;
    let vel_d = tr.inverse(&state.v_d)?;
    let v_h = state
        .v_h
        .iter()
        .map(|f| transport(tr, &vel_h, &vel_d, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(Advection {
        v_h,
        v_d: transport(tr, &vel_h, &vel_d, &state.v_d)?,
        theta: transport(tr, &vel_h, &vel_d, &state.theta)?,
    })
}

/// Right-hand side split by origin; each part has the state's field layout.
#[derive(Debug, Clone)]
pub struct Tendency {
    /// `(-|eta|^{2 alpha} v_h, -|eta|^{2 alpha} v_d, 0)`.
    pub linear_stiff: FlowState,
    /// `(-P (v.grad) v, -(v.grad) theta)`.
    pub nonlinear: FlowState,
    /// `(P (theta e_d), -v_d)`.
    pub buoyancy: FlowState,
}

impl Tendency {
    pub fn total(&self) -> Result<FlowState> {
        let mut out = self.linear_stiff.clone();
        out.axpy(1.0, &self.nonlinear)?;
        out.axpy(1.0, &self.buoyancy)?;
        Ok(out)
    }
}

/// Projected nonlinear part only, `(-P (v.grad) v, -(v.grad) theta)`.
pub(crate) fn nonlinear_part(tr: &Transformer, state: &FlowState) -> Result<FlowState> {
    let adv = advection(tr, state)?;
    let (p_h, p_d) = leray_project(&adv.v_h, &adv.v_d)?;
    let mut out = FlowState::new(p_h, p_d, adv.theta, state.alpha)?;
    out.fields_mut().for_each(|f| {
        f.scale(-1.0);
        f.symmetrize();
    });
    out.t = state.t;
    Ok(out)
}

/// Buoyancy part `(P (theta e_d), -v_d)`.
pub(crate) fn buoyancy_part(state: &FlowState) -> Result<FlowState> {
    let trunc = *state.trunc();
    let zeros = vec![SpectralField::zeros(BasisKind::C, trunc); trunc.horizontal_dims()];
    let (b_h, b_d) = leray_project(&zeros, &state.theta)?;
    let mut out = FlowState::new(b_h, b_d, state.v_d.scaled(-1.0), state.alpha)?;
    out.t = state.t;
    Ok(out)
}

pub(crate) fn stiff_part(state: &FlowState) -> FlowState {
    let alpha = state.alpha;
    let mut out = state.clone();
    for f in out.v_h.iter_mut().chain([&mut out.v_d]) {
        *f = f.map_modes(|m, c| -alpha.dissipation(m.eta_sq()) * c);
    }
    out.theta.scale(0.0);
    out
}

/// Full tendency of the system at `state`.
pub fn nonlinear_rhs(tr: &Transformer, state: &FlowState) -> Result<Tendency> {
    Ok(Tendency {
        linear_stiff: stiff_part(state),
        nonlinear: nonlinear_part(tr, state)?,
        buoyancy: buoyancy_part(state)?,
    })
}
