use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    ThetaBar,
    VD,
}

/// Algebraic exponent of the linear decay bound for `\dot H^s`.
pub fn predicted_slope(s: f64, m: f64, alpha: Alpha, kind: EnvelopeKind) -> f64 {
    let base = -(m - s) / (2.0 * (1.0 + alpha.value()));
    match kind {
        EnvelopeKind::ThetaBar => base,
        EnvelopeKind::VD => base - 1.0,
    }
}

/// `e^{-t/4} + (1+t)^{slope}` with unit constants; for slope comparison only.
pub fn decay_envelope(s: f64, m: f64, t: f64, alpha: Alpha, kind: EnvelopeKind) -> Result<f64> {
    if s > m {
        return Err(Error::Domain(format!("s = {s} exceeds m = {m}")));
    }
    if t < 0.0 {
        return Err(Error::Domain(format!("negative time {t}")));
    }
    Ok((-t / 4.0).exp() + (1.0 + t).powf(predicted_slope(s, m, alpha, kind)))
}
