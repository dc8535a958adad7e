use num_complex::Complex64;
use rayon::prelude::*;

use super::eigen::{eigensystem, ModeEigenSystem};
use super::phi::{divided_difference2, exp_diff};
use crate::basis::{BasisKind, ModeIndex, Truncation};
use crate::error::{Error, Result};
use crate::fields::{Alpha, FlowState};

/// Real linear map advancing one mode over a fixed time `t`.
///
/// `(v_d, theta) -> e * (v_d, theta)` and, for the horizontal velocity at the
/// matching C-mode, `v_h -> ea v_h + i kappa (g[0] v_d + g[1] theta)` where
/// `kappa = q~ n~ / |eta|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator {
    pub e: [[f64; 2]; 2],
    pub ea: f64,
    pub g: [f64; 2],
    pub kappa: [f64; 2],
}

impl ModePropagator {
    /// Exact propagator for any real `t` (negative `t` inverts).
    pub fn from_eigensystem(es: &ModeEigenSystem, t: f64) -> Self {
        let a = es.a();
        let c = es.c();
        let (lp, lm) = (es.lambda_plus, es.lambda_minus);
        let ep = (-lp * t).exp();
        // (e^{-lm t} - e^{-lp t}) / (lp - lm)
        let q = exp_diff(lp, lm, t);
        // e^{-Mt} = ep I - q (M - lp I), with M - lp I = [[lm, -c], [1, -lp]].
        let e = [
            [(ep - q * lm).re, (q * c).re],
            [(-q).re, (ep + q * lp).re],
        ];
        let ac = Complex64::new(a, 0.0);
        // int_0^t e^{-a(t-s)} e^{-lp s} ds and int_0^t e^{-a(t-s)} q(s) ds.
        let j = exp_diff(ac, lp, t);
        let q2 = divided_difference2([ac, lp, lm], t);
        let g = [(-q2).re, (j + lp * q2).re];
        let eta_sq = es.mode.eta_sq();
        let nt = es.mode.n_tilde();
        let qt = es.mode.q_tilde();
        Self {
            e,
            ea: (-a * t).exp(),
            g,
            kappa: [qt * nt[0] / eta_sq, qt * nt[1] / eta_sq],
        }
    }

    pub fn apply(&self, u: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.e[0][0] * u[0] + self.e[0][1] * u[1],
            self.e[1][0] * u[0] + self.e[1][1] * u[1],
        ]
    }

    /// New horizontal velocity component `k` from its old value and the
    /// initial `(v_d, theta)`.
    pub fn apply_vh(&self, k: usize, vh: Complex64, u: [Complex64; 2]) -> Complex64 {
        self.ea * vh + Complex64::new(0.0, self.kappa[k]) * (self.g[0] * u[0] + self.g[1] * u[1])
    }
}

/// `e^{-Mt} u0` for one mode, `t >= 0`.
pub fn propagate_mode(
    u0: [Complex64; 2],
    mode: &ModeIndex,
    alpha: Alpha,
    t: f64,
) -> Result<[Complex64; 2]> {
    if t < 0.0 {
        return Err(Error::Domain(format!("negative propagation time {t}")));
    }
    let es = eigensystem(mode, alpha)?;
    Ok(ModePropagator::from_eigensystem(&es, t).apply(u0))
}

/// Propagators of every mode for one time increment.
#[derive(Debug, Clone)]
pub struct PropagatorTable {
    trunc: Truncation,
    alpha: Alpha,
    t: f64,
    /// Indexed by B-mode storage position.
    modes: Vec<ModePropagator>,
    /// `e^{-|eta|^{2 alpha} t}` per C-mode.
    c_decay: Vec<f64>,
}

impl PropagatorTable {
    /// Table for time `t`; negative `t` gives the exact inverse.
    pub fn new(trunc: Truncation, alpha: Alpha, t: f64) -> Result<Self> {
        let modes = (0..trunc.mode_count(BasisKind::B))
            .into_par_iter()
            .map(|i| {
                let es = eigensystem(&trunc.mode(BasisKind::B, i), alpha)?;
                Ok(ModePropagator::from_eigensystem(&es, t))
            })
            .collect::<Result<Vec<_>>>()?;
        let c_decay = trunc
            .modes(BasisKind::C)
            .map(|m| (-alpha.dissipation(m.eta_sq()) * t).exp())
            .collect();
        Ok(Self {
            trunc,
            alpha,
            t,
            modes,
            c_decay,
        })
    }

    pub fn from_eigen_table(trunc: Truncation, table: &[ModeEigenSystem], t: f64) -> Result<Self> {
        let alpha = table
            .first()
            .map(|e| e.alpha)
            .ok_or_else(|| Error::Dimension("empty eigen table".into()))?;
        if table.len() != trunc.mode_count(BasisKind::B) {
            return Err(Error::Dimension("eigen table does not match truncation".into()));
        }
        let modes = table
            .par_iter()
            .map(|es| ModePropagator::from_eigensystem(es, t))
            .collect();
        let c_decay = trunc
            .modes(BasisKind::C)
            .map(|m| (-alpha.dissipation(m.eta_sq()) * t).exp())
            .collect();
        Ok(Self {
            trunc,
            alpha,
            t,
            modes,
            c_decay,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn mode(&self, b_index: usize) -> &ModePropagator {
        &self.modes[b_index]
    }

    /// Applies the linear evolution to a state (time is advanced by `t`).
    pub fn apply(&self, state: &FlowState) -> Result<FlowState> {
        if *state.trunc() != self.trunc {
            return Err(Error::Dimension("state truncation differs from propagator".into()));
        }
        if state.alpha != self.alpha {
            return Err(Error::Dimension("state alpha differs from propagator".into()));
        }
        let mut out = state.clone();
        let nq = self.trunc.q_max;
        let vd0 = state.v_d.coeffs();
        let th0 = state.theta.coeffs();
        {
            let (vd, th) = (out.v_d.coeffs_mut(), out.theta.coeffs_mut());
            for (i, p) in self.modes.iter().enumerate() {
                let u = p.apply([vd0[i], th0[i]]);
                vd[i] = u[0];
                th[i] = u[1];
            }
        }
        for (k, comp) in out.v_h.iter_mut().enumerate() {
            let src = state.v_h[k].coeffs();
            let dst = comp.coeffs_mut();
            for (ci, (d, &s)) in dst.iter_mut().zip(src).enumerate() {
                let h = ci / (nq + 1);
                let q = ci % (nq + 1);
                *d = if q == 0 {
                    self.c_decay[ci] * s
                } else {
                    let bi = h * nq + q - 1;
                    self.modes[bi].apply_vh(k, s, [vd0[bi], th0[bi]])
                };
            }
        }
        out.t = state.t + self.t;
        Ok(out)
    }
}

/// Exact solution of the linearized system after time `t >= 0`.
pub fn propagate_linear(state0: &FlowState, t: f64) -> Result<FlowState> {
    if t < 0.0 {
        return Err(Error::Domain(format!("negative propagation time {t}")));
    }
    PropagatorTable::new(*state0.trunc(), state0.alpha, t)?.apply(state0)
}
