use serde::Serialize;

use super::state::{Alpha, FlowState};
use crate::basis::{BasisKind, PhysicalGrid, Transformer};
use crate::error::{Error, Result};

/// Outcome of one validation check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub max_violation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(max_violation: f64, tolerance: f64) -> Self {
        Self {
            max_violation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_violation <= self.tolerance
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// Relative divergence residual over all C-modes.
    pub divergence: Check,
    /// Largest `|F_b v_d(0, q)|`.
    pub vd_mean: Check,
    /// Relative conjugate-symmetry defect.
    pub reality: Check,
    /// Only present for grid-ingested data: relative mismatch between the
    /// samples and their band-limited B/C reconstruction, including wall
    /// traces of B-fields.
    pub compatibility: Option<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.divergence.passed()
            && self.vd_mean.passed()
            && self.reality.passed()
            && self.compatibility.as_ref().is_none_or(Check::passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.divergence.passed() {
            out.push("divergence");
        }
        if !self.vd_mean.passed() {
            out.push("vd_mean");
        }
        if !self.reality.passed() {
            out.push("reality");
        }
        if self.compatibility.as_ref().is_some_and(|c| !c.passed()) {
            out.push("compatibility");
        }
        out
    }
}

/// Divergence `i n~ . F_c v_h + q~ F_b v_d` per C-mode, scaled by the
/// largest term entering it.
pub(crate) fn divergence_residual(state: &FlowState) -> f64 {
    let trunc = *state.trunc();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (i, mode) in trunc.modes(BasisKind::C).enumerate() {
        let nt = mode.n_tilde();
        let mut div = num_complex::Complex64::default();
        let mut mag = 0.0;
        for (k, f) in state.v_h.iter().enumerate() {
            let c = f.coeffs()[i];
            div += num_complex::Complex64::new(0.0, nt[k]) * c;
            mag += nt[k].abs() * c.norm();
        }
        if mode.q() >= 1 {
            let c = state.v_d.get(&mode);
            div += mode.q_tilde() * c;
            mag += mode.q_tilde() * c.norm();
        }
        worst = worst.max(div.norm());
        scale = scale.max(mag);
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

pub(crate) fn vd_mean_violation(state: &FlowState) -> f64 {
    state
        .v_d
        .iter()
        .filter(|(m, _)| m.is_zero_n())
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

/// Report-only validation of a state's structural invariants.
pub fn validate_state(state: &FlowState) -> ValidationReport {
    let scale = state.max_abs().max(1.0);
    let reality = state
        .fields()
        .map(|f| f.conjugate_symmetry_defect())
        .fold(0.0, f64::max)
        / scale;
    ValidationReport {
        divergence: Check::new(divergence_residual(state), 1e-10),
        vd_mean: Check::new(vd_mean_violation(state), 1e-13 * scale),
        reality: Check::new(reality, 1e-12),
        compatibility: None,
    }
}

fn compatibility_residual(tr: &Transformer, grid: &PhysicalGrid, kind: BasisKind) -> Result<(f64, f64)> {
    let f = tr.forward(grid, kind)?;
    let back = tr.inverse(&f)?;
    let mut worst = grid
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if kind == BasisKind::B {
        let trunc = tr.trunc();
        for g in 0..trunc.layer_len() {
            worst = worst
                .max(grid.at(g, 0).abs())
                .max(grid.at(g, trunc.grid_v).abs());
        }
    }
    Ok((worst, grid.max_abs()))
}

/// Builds a state from physical samples.
///
/// Samples must be representable in their B/C family to within `1e-8`
/// relative: B-fields vanish on the walls and every field's content beyond
/// the truncation is negligible. Such data automatically satisfies the
/// even/odd wall-derivative conditions of its family. Data failing any check
/// is rejected, never projected.
pub fn ingest_grid(
    tr: &Transformer,
    alpha: Alpha,
    v_h: &[PhysicalGrid],
    v_d: &PhysicalGrid,
    theta: &PhysicalGrid,
) -> Result<(FlowState, ValidationReport)> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    let mut fields = Vec::with_capacity(v_h.len());
    for g in v_h {
        let (w, s) = compatibility_residual(tr, g, BasisKind::C)?;
        worst = worst.max(w);
        scale = scale.max(s);
        fields.push(tr.forward(g, BasisKind::C)?);
    }
    for g in [v_d, theta] {
        let (w, s) = compatibility_residual(tr, g, BasisKind::B)?;
        worst = worst.max(w);
        scale = scale.max(s);
    }
    let state = FlowState::new(
        fields,
        tr.forward(v_d, BasisKind::B)?,
        tr.forward(theta, BasisKind::B)?,
        alpha,
    )?;
    let mut report = validate_state(&state);
    let rel = if scale == 0.0 { 0.0 } else { worst / scale };
    report.compatibility = Some(Check::new(rel, 1e-8));
    if !report.passed() {
        return Err(Error::Rejected(format!(
            "grid data failed: {}",
            report.failures().join(", ")
        )));
    }
    Ok((state, report))
}
