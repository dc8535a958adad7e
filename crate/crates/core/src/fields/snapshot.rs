use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{Alpha, FlowState};
use crate::basis::{BasisKind, SpectralField, Truncation};
use crate::error::{Error, Result};

pub const MODE_ORDERING: &str = "lexicographic (n_1, ..., n_{d-1}, q); n_i from -n_max to n_max; q from 1 (B) or 0 (C) to q_max";

/// Serialized form of a [`FlowState`]; complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub d: usize,
    pub alpha: Alpha,
    pub truncation: Truncation,
    pub t: f64,
    pub ordering: String,
    pub v_h: Vec<Vec<Complex64>>,
    pub v_d: Vec<Complex64>,
    pub theta: Vec<Complex64>,
}

impl StateSnapshot {
    pub fn from_state(state: &FlowState) -> Self {
        Self {
            d: state.d(),
            alpha: state.alpha,
            truncation: *state.trunc(),
            t: state.t,
            ordering: MODE_ORDERING.into(),
            v_h: state.v_h.iter().map(|f| f.coeffs().to_vec()).collect(),
            v_d: state.v_d.coeffs().to_vec(),
            theta: state.theta.coeffs().to_vec(),
        }
    }

    pub fn into_state(self) -> Result<FlowState> {
        let t = self.truncation;
        let trunc = Truncation::with_grid(t.d, t.n_max, t.q_max, t.grid_h, t.grid_v)?;
        if trunc.d != self.d {
            return Err(Error::Dimension(format!(
                "snapshot d = {} but truncation d = {}",
                self.d, trunc.d
            )));
        }
        let v_h = self
            .v_h
            .into_iter()
            .map(|c| SpectralField::from_coeffs(BasisKind::C, trunc, c))
            .collect::<Result<Vec<_>>>()?;
        let mut state = FlowState::new(
            v_h,
            SpectralField::from_coeffs(BasisKind::B, trunc, self.v_d)?,
            SpectralField::from_coeffs(BasisKind::B, trunc, self.theta)?,
            self.alpha,
        )?;
        state.t = self.t;
        Ok(state)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(f, self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(f)?)
    }
}
