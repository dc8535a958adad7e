use serde::{Deserialize, Serialize};

use crate::basis::{BasisKind, SpectralField, Truncation};
use crate::error::{Error, Result};

/// Dissipation exponent: `0` for damping, `1` for viscosity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Alpha {
    Zero,
    One,
}

impl Alpha {
    pub fn value(self) -> f64 {
        match self {
            Alpha::Zero => 0.0,
            Alpha::One => 1.0,
        }
    }

    /// `|eta|^{2 alpha}` given `|eta|^2` (with `0^0 = 1`).
    pub fn dissipation(self, eta_sq: f64) -> f64 {
        match self {
            Alpha::Zero => 1.0,
            Alpha::One => eta_sq,
        }
    }
}

impl TryFrom<u8> for Alpha {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Alpha::Zero),
            1 => Ok(Alpha::One),
            _ => Err(Error::Config(format!("alpha must be 0 or 1, got {v}"))),
        }
    }
}

impl From<Alpha> for u8 {
    fn from(a: Alpha) -> u8 {
        match a {
            Alpha::Zero => 0,
            Alpha::One => 1,
        }
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

/// Velocity `(v_h, v_d)` and temperature `theta` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub v_h: Vec<SpectralField>,
    pub v_d: SpectralField,
    pub theta: SpectralField,
    pub alpha: Alpha,
    pub t: f64,
}

impl FlowState {
    pub fn zeros(trunc: Truncation, alpha: Alpha) -> Self {
        Self {
            v_h: vec![SpectralField::zeros(BasisKind::C, trunc); trunc.horizontal_dims()],
            v_d: SpectralField::zeros(BasisKind::B, trunc),
            theta: SpectralField::zeros(BasisKind::B, trunc),
            alpha,
            t: 0.0,
        }
    }

    /// Assembles a state, checking tags and truncations.
    pub fn new(
        v_h: Vec<SpectralField>,
        v_d: SpectralField,
        theta: SpectralField,
        alpha: Alpha,
    ) -> Result<Self> {
        let trunc = *theta.trunc();
        if v_h.len() != trunc.horizontal_dims() {
            return Err(Error::Dimension(format!(
                "expected {} horizontal velocity components, got {}",
                trunc.horizontal_dims(),
                v_h.len()
            )));
        }
        for f in &v_h {
            if f.kind() != BasisKind::C {
                return Err(Error::Dimension("v_h components must be C-fields".into()));
            }
            if *f.trunc() != trunc {
                return Err(Error::Dimension("v_h truncation differs from theta".into()));
            }
        }
        if v_d.kind() != BasisKind::B || theta.kind() != BasisKind::B {
            return Err(Error::Dimension("v_d and theta must be B-fields".into()));
        }
        if *v_d.trunc() != trunc {
            return Err(Error::Dimension("v_d truncation differs from theta".into()));
        }
        Ok(Self {
            v_h,
            v_d,
            theta,
            alpha,
            t: 0.0,
        })
    }

    pub fn trunc(&self) -> &Truncation {
        self.theta.trunc()
    }

    pub fn d(&self) -> usize {
        self.trunc().d
    }

    /// All component fields: `v_h` components, then `v_d`, then `theta`.
    pub fn fields(&self) -> impl Iterator<Item = &SpectralField> {
        self.v_h.iter().chain([&self.v_d, &self.theta])
    }

    pub fn fields_mut(&mut self) -> impl Iterator<Item = &mut SpectralField> {
        self.v_h.iter_mut().chain([&mut self.v_d, &mut self.theta])
    }

    pub fn is_real(&self) -> bool {
        self.fields().all(|f| f.is_real())
    }

    pub fn symmetrize(&mut self) {
        self.fields_mut().for_each(|f| f.symmetrize());
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.fields_mut().for_each(|f| f.scale(s));
        out
    }

    /// `self += a * other` (time is left untouched).
    pub fn axpy(&mut self, a: f64, other: &FlowState) -> Result<()> {
        for (x, y) in self.fields_mut().zip(other.fields()) {
            x.axpy(a, y)?;
        }
        Ok(())
    }

    /// Largest coefficient difference over all components.
    pub fn max_diff(&self, other: &FlowState) -> f64 {
        self.fields()
            .zip(other.fields())
            .flat_map(|(a, b)| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.fields().map(|f| f.max_abs()).fold(0.0, f64::max)
    }

    /// Sum of absolute velocity coefficients, an upper bound for `sup |v|`.
    pub fn velocity_l1(&self) -> f64 {
        let vh: f64 = (0..self.v_h[0].coeffs().len())
            .map(|i| {
                self.v_h
                    .iter()
                    .map(|f| f.coeffs()[i].norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .sum();
        vh + self.v_d.l1()
    }
}
