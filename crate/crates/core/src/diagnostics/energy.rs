use serde::{Deserialize, Serialize};

use crate::basis::ModeIndex;
use crate::error::{Error, Result};
use crate::fields::{sobolev_norm, FlowState, NormSpec};

/// `E_k = (||v||_{H^k}^2 + ||theta||_{H^k}^2)^{1/2}` (inhomogeneous).
pub fn energy_e(state: &FlowState, k: f64) -> Result<f64> {
    let spec = NormSpec::inhomogeneous(k);
    let mut acc = 0.0;
    for f in state.fields() {
        acc += sobolev_norm(f, &spec)?.powi(2);
    }
    Ok(acc.sqrt())
}

/// `sum_{|gamma|=j} prod x_i^{gamma_i}` over multi-indices, for `j = 0..=k`.
fn complete_homogeneous(x: &[f64], k: usize) -> Vec<f64> {
    // h_j(x_1..x_r) = h_j(x_1..x_{r-1}) + x_r h_{j-1}(x_1..x_r).
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &xi in x {
        for j in 1..=k {
            h[j] += xi * h[j - 1];
        }
    }
    h
}

fn symbol_weight(mode: &ModeIndex, k: usize) -> f64 {
    let nt = mode.n_tilde();
    let qt = mode.q_tilde();
    let mut x: Vec<f64> = nt[..mode.horizontal_dims()].iter().map(|v| v * v).collect();
    x.push(qt * qt);
    complete_homogeneous(&x, k)[1..].iter().sum()
}

/// `A_k = sum_{1<=|gamma|<=k} int d^gamma v_d d^gamma theta`.
pub fn cross_a(state: &FlowState, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("A_k needs k >= 1".into()));
    }
    Ok(state
        .v_d
        .iter()
        .zip(state.theta.coeffs())
        .map(|((m, v), th)| symbol_weight(&m, k) * (v * th.conj()).re)
        .sum())
}

/// Running `int ||grad v||_{L^inf} dt` and `int ||d_d v_d||_{L^inf} dt`
/// through their coefficient-sum bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct KeyQuantities {
    pub k1: f64,
    pub k2: f64,
}

impl KeyQuantities {
    /// Current integrands `(sum |eta| |v_h| + sum |eta|^2 |v_d|, sum q~ |v_d|)`.
    pub fn integrands(state: &FlowState) -> (f64, f64) {
        let n = state.v_h[0].coeffs().len();
        let trunc = state.trunc();
        let mut g1 = 0.0;
        for i in 0..n {
            let mag: f64 = state.v_h.iter().map(|f| f.coeffs()[i].norm_sqr()).sum::<f64>();
            if mag > 0.0 {
                g1 += trunc.mode(crate::basis::BasisKind::C, i).eta() * mag.sqrt();
            }
        }
        let mut g2 = 0.0;
        for (m, c) in state.v_d.iter() {
            let a = c.norm();
            g1 += m.eta_sq() * a;
            g2 += m.q_tilde() * a;
        }
        (g1, g2)
    }

    /// Adds `dt` times the integrands at `state`.
    pub fn step(&mut self, state: &FlowState, dt: f64) {
        let (g1, g2) = Self::integrands(state);
        self.k1 += dt * g1;
        self.k2 += dt * g2;
    }
}

/// `B_m(T)^2 = sup E_m^2 + int ||Lambda^alpha v||_{H^m}^2 + int ||grad_h theta||_{H^{m-1-alpha}}^2`.
///
/// This is also the left side of the global energy bound, which is
/// compared against `4 ||(v_0, theta_0)||_{H^m}^2`. Time integrals use the
/// trapezoidal rule over the pushed samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BmAccumulator {
    pub m: f64,
    pub sup_energy_sq: f64,
    pub dissipation_integral: f64,
    pub theta_integral: f64,
    last: Option<(f64, f64, f64)>,
}

impl BmAccumulator {
    pub fn new(m: f64) -> Self {
        Self {
            m,
            ..Self::default()
        }
    }

    fn integrands(&self, state: &FlowState) -> Result<(f64, f64)> {
        let a = state.alpha.value();
        let v_spec = NormSpec::inhomogeneous(self.m).with_lambda(a);
        let mut dv = 0.0;
        for f in state.v_h.iter().chain([&state.v_d]) {
            dv += sobolev_norm(f, &v_spec)?.powi(2);
        }
        // ||grad_h theta||^2 = sum |n~|^2 w = |eta|^2 (|n~|/|eta|)^2 w.
        let th_spec = NormSpec::inhomogeneous(self.m - 1.0 - a)
            .with_riesz(1)
            .with_lambda(1.0);
        let dt = sobolev_norm(&state.theta, &th_spec)?.powi(2);
        Ok((dv, dt))
    }

    pub fn push(&mut self, state: &FlowState) -> Result<()> {
        let e = energy_e(state, self.m)?;
        self.sup_energy_sq = self.sup_energy_sq.max(e * e);
        let (dv, dth) = self.integrands(state)?;
        if let Some((t0, dv0, dth0)) = self.last {
            let h = state.t - t0;
            self.dissipation_integral += 0.5 * h * (dv0 + dv);
            self.theta_integral += 0.5 * h * (dth0 + dth);
        }
        self.last = Some((state.t, dv, dth));
        Ok(())
    }

    pub fn value_sq(&self) -> f64 {
        self.sup_energy_sq + self.dissipation_integral + self.theta_integral
    }

    pub fn value(&self) -> f64 {
        self.value_sq().sqrt()
    }
}
