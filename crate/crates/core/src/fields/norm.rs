use serde::{Deserialize, Serialize};

use crate::basis::{c_norm_sq, BasisKind, ModeIndex, SpectralField};
use crate::error::{Error, Result};

/// Weighted l2 norm `sum w(eta) |coeff|^2` with
/// `w = |eta|^{2s} (|n~|/|eta|)^{2a} |eta|^{2b}`.
///
/// The inhomogeneous variant replaces `|eta|^{2s}` by `(1+|eta|^2)^s`.
/// Weights include the squared `L^2` norm of the basis function, which is 2
/// for the constant vertical profile and 1 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormSpec {
    pub s: f64,
    pub homogeneous: bool,
    pub riesz_power: u32,
    pub lambda_power: f64,
    pub restrict_to_nonzero_n: bool,
}

impl Default for NormSpec {
    fn default() -> Self {
        Self {
            s: 0.0,
            homogeneous: true,
            riesz_power: 0,
            lambda_power: 0.0,
            restrict_to_nonzero_n: false,
        }
    }
}

impl NormSpec {
    /// `\dot H^s`.
    pub fn homogeneous(s: f64) -> Self {
        Self {
            s,
            ..Self::default()
        }
    }

    /// `H^s` with weight `(1+|eta|^2)^s`.
    pub fn inhomogeneous(s: f64) -> Self {
        Self {
            s,
            homogeneous: false,
            ..Self::default()
        }
    }

    /// Drop the horizontal mean (`n = 0` modes).
    pub fn bar(mut self) -> Self {
        self.restrict_to_nonzero_n = true;
        self
    }

    pub fn with_riesz(mut self, a: u32) -> Self {
        self.riesz_power = a;
        self
    }

    pub fn with_lambda(mut self, b: f64) -> Self {
        self.lambda_power = b;
        self
    }

    fn singular_at_origin(&self) -> bool {
        self.riesz_power > 0 || self.lambda_power < 0.0 || (self.homogeneous && self.s < 0.0)
    }
}

/// Squared-norm weight of one mode, `None` if the mode is excluded.
pub fn mode_weight(mode: &ModeIndex, kind: BasisKind, spec: &NormSpec) -> Result<Option<f64>> {
    if spec.restrict_to_nonzero_n && mode.is_zero_n() {
        return Ok(None);
    }
    let basis = match kind {
        BasisKind::B => 1.0,
        BasisKind::C => c_norm_sq(mode.q()),
    };
    let eta_sq = mode.eta_sq();
    if eta_sq == 0.0 {
        if spec.singular_at_origin() {
            return Err(Error::NormSpec(format!(
                "negative power at eta = 0 (mode {mode})"
            )));
        }
        let w = if spec.homogeneous && spec.s > 0.0 { 0.0 } else { 1.0 };
        let w = if spec.lambda_power > 0.0 { 0.0 } else { w };
        return Ok(Some(w * basis));
    }
    let base = if spec.homogeneous {
        eta_sq.powf(spec.s)
    } else {
        (1.0 + eta_sq).powf(spec.s)
    };
    let riesz = (mode.n_tilde_sq() / eta_sq).powi(spec.riesz_power as i32);
    let lam = eta_sq.powf(spec.lambda_power);
    Ok(Some(base * riesz * lam * basis))
}

/// Weighted spectral norm of `f`.
///
/// A singular weight at `eta = 0` is an error only when that coefficient
/// is nonzero.
pub fn sobolev_norm(f: &SpectralField, spec: &NormSpec) -> Result<f64> {
    let mut acc = 0.0;
    for (mode, c) in f.iter() {
        let m2 = c.norm_sqr();
        if m2 == 0.0 {
            continue;
        }
        if let Some(w) = mode_weight(&mode, f.kind(), spec)? {
            acc += w * m2;
        }
    }
    Ok(acc.sqrt())
}

/// Removes the horizontal mean: zeroes all `n = 0` coefficients.
pub fn project_mean_free(f: &SpectralField) -> SpectralField {
    f.map_modes(|m, c| if m.is_zero_n() { Default::default() } else { c })
}
