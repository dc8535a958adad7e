use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::fit_decay_exponent;
use crate::basis::{BasisKind, ModeIndex, SpectralField, Transformer};
use crate::dynamics::advection;
use crate::fields::FlowState;
use crate::error::{Error, Result};

/// Horizontal mean of `(v.grad) theta + v_d` at one time: its B-profile
/// coefficients for `q = 1..=q_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSample {
    pub t: f64,
    pub coeffs: Vec<Complex64>,
}

impl FluxSample {
    pub fn from_field(t: f64, flux: &SpectralField) -> Self {
        let coeffs = (1..=flux.trunc().q_max as u32)
            .map(|q| flux.get(&zero_mode(flux, q)))
            .collect();
        Self { t, coeffs }
    }

    /// Flux of the linear dynamics: only `v_d` contributes (and its mean vanishes
    /// for valid states).
    pub fn linear(state: &FlowState) -> Self {
        Self::from_field(state.t, &state.v_d)
    }

    /// Flux including the advective term `(v.grad) theta`.
    pub fn nonlinear(tr: &Transformer, state: &FlowState) -> Result<Self> {
        let mut flux = advection(tr, state)?.theta;
        flux.axpy(1.0, &state.v_d)?;
        Ok(Self::from_field(state.t, &flux))
    }

    fn l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn zero_mode(f: &SpectralField, q: u32) -> ModeIndex {
    let zeros = [0i64; 2];
    ModeIndex::new(&zeros[..f.trunc().horizontal_dims()], q).expect("valid zero mode")
}

/// Asymptotic temperature profile `sigma(x_d)` as B-profile coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaProfile {
    pub coeffs: Vec<Complex64>,
    /// Estimated `L^2` size of the neglected integral beyond the last sample.
    pub tail_error: f64,
    pub tail_tol: f64,
}

impl SigmaProfile {
    pub fn converged(&self) -> bool {
        self.tail_error < self.tail_tol
    }

    /// `sigma` as a B-field supported on `n = 0`.
    pub fn to_field(&self, like: &SpectralField) -> Result<SpectralField> {
        let mut f = SpectralField::zeros(BasisKind::B, *like.trunc());
        for (i, c) in self.coeffs.iter().enumerate() {
            f.set(&zero_mode(like, i as u32 + 1), *c)?;
        }
        f.set_real(true);
        Ok(f)
    }

    pub fn l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `sigma = mean(theta_0) - int_0^inf mean((v.grad) theta + v_d) dt`.
///
/// The integral over the samples uses the trapezoidal rule. The remainder
/// beyond the last sample is estimated from a power-law fit of the flux size
/// over the second half of the samples; if that fit does not decay faster
/// than `1/t`, the tail error is infinite.
pub fn sigma_profile(theta0: &SpectralField, samples: &[FluxSample], tail_tol: f64) -> Result<SigmaProfile> {
    if theta0.kind() != BasisKind::B {
        return Err(Error::Dimension("theta must be a B-field".into()));
    }
    let q_max = theta0.trunc().q_max;
    if samples.iter().any(|s| s.coeffs.len() != q_max) {
        return Err(Error::Dimension("flux samples do not match the truncation".into()));
    }
    if samples.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::Domain("flux sample times must increase".into()));
    }
    let mut coeffs: Vec<Complex64> = (1..=q_max as u32)
        .map(|q| theta0.get(&zero_mode(theta0, q)))
        .collect();
    for w in samples.windows(2) {
        let h = w[1].t - w[0].t;
        for (c, (a, b)) in coeffs.iter_mut().zip(w[0].coeffs.iter().zip(&w[1].coeffs)) {
            *c -= 0.5 * h * (a + b);
        }
    }
    let tail_error = match samples.last() {
        None => f64::INFINITY,
        Some(last) if last.l2() == 0.0 => 0.0,
        Some(last) => {
            let tail = &samples[samples.len() / 2..];
            let ts: Vec<f64> = tail.iter().map(|s| s.t).collect();
            let ys: Vec<f64> = tail.iter().map(|s| s.l2()).collect();
            match fit_decay_exponent(&ts, &ys, (ts[0], last.t)) {
                Ok(fit) if fit.slope < -1.0 => last.l2() * (1.0 + last.t) / (-fit.slope - 1.0),
                _ => f64::INFINITY,
            }
        }
    };
    Ok(SigmaProfile {
        coeffs,
        tail_error,
        tail_tol,
    })
}
