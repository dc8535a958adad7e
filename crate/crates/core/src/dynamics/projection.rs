use num_complex::Complex64;

use super::nonlinear::advection;
use crate::basis::{BasisKind, SpectralField, Transformer};
use crate::error::{Error, Result};
use crate::fields::FlowState;

/// Leray projection of a velocity-shaped field pair, mode by mode.
///
/// `w_h` are C-fields, `w_d` a B-field. The `eta = 0` mode passes through.
pub fn leray_project(
    w_h: &[SpectralField],
    w_d: &SpectralField,
) -> Result<(Vec<SpectralField>, SpectralField)> {
    let trunc = *w_d.trunc();
    if w_d.kind() != BasisKind::B
        || w_h.len() != trunc.horizontal_dims()
        || w_h.iter().any(|f| f.kind() != BasisKind::C || *f.trunc() != trunc)
    {
        return Err(Error::Dimension(
            "projection expects d-1 C-fields and one B-field on one truncation".into(),
        ));
    }
    let mut out_h: Vec<SpectralField> = w_h.to_vec();
    let mut out_d = w_d.clone();
    let nq = trunc.q_max;
    let dh = trunc.horizontal_dims();
    for (ci, mode) in trunc.modes(BasisKind::C).enumerate() {
        let eta_sq = mode.eta_sq();
        if eta_sq == 0.0 {
            continue;
        }
        let nt = mode.n_tilde();
        let qt = mode.q_tilde();
        let bi = (mode.q() >= 1).then(|| (ci / (nq + 1)) * nq + mode.q() as usize - 1);
        let wd = bi.map_or(Complex64::default(), |b| w_d.coeffs()[b]);
        let n_dot_w: Complex64 = (0..dh).map(|k| nt[k] * w_h[k].coeffs()[ci]).sum();
        let i = Complex64::i();
        for k in 0..dh {
            out_h[k].coeffs_mut()[ci] =
                w_h[k].coeffs()[ci] - nt[k] * n_dot_w / eta_sq + i * qt * nt[k] * wd / eta_sq;
        }
        if let Some(b) = bi {
            out_d.coeffs_mut()[b] = wd - i * qt * n_dot_w / eta_sq - qt * qt * wd / eta_sq;
        }
    }
    Ok((out_h, out_d))
}

/// `(grad_h P, d_d P)` with the pressure mean fixed to zero.
///
/// Computed as `(I - P)(theta e_d - (v.grad) v)`.
pub fn pressure_gradient(
    tr: &Transformer,
    state: &FlowState,
) -> Result<(Vec<SpectralField>, SpectralField)> {
    let adv = advection(tr, state)?;
    let w_h: Vec<SpectralField> = adv.v_h.iter().map(|f| f.scaled(-1.0)).collect();
    let mut w_d = state.theta.clone();
    w_d.axpy(-1.0, &adv.v_d)?;
    let (p_h, p_d) = leray_project(&w_h, &w_d)?;
    let g_h = w_h
        .iter()
        .zip(&p_h)
        .map(|(w, p)| {
            let mut g = w.clone();
            g.axpy(-1.0, p)?;
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut g_d = w_d;
    g_d.axpy(-1.0, &p_d)?;
    Ok((g_h, g_d))
}
