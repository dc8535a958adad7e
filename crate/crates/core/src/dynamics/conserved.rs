use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::basis::{b_integral, c_integral};
use crate::error::Result;
use crate::fields::{FlowState, StateSnapshot};

/// Quantities conserved (or with known evolution) by the exact dynamics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservedQuantities {
    /// Integral of `theta` over the strip.
    pub theta_integral: f64,
    /// Integral of each horizontal velocity component.
    pub vh_integral: Vec<f64>,
    /// `max_q |F_b v_d(0, q)|`.
    pub vd_mean_max: f64,
}

/// Reads the conserved quantities from the `n = 0` coefficients.
pub fn conserved_quantities(state: &FlowState) -> ConservedQuantities {
    let zero_n = |m: &crate::basis::ModeIndex| m.is_zero_n();
    let theta_integral = state
        .theta
        .iter()
        .filter(|(m, _)| zero_n(m))
        .map(|(m, c)| c.re * b_integral(m.q()))
        .sum();
    let vh_integral = state
        .v_h
        .iter()
        .map(|f| {
            f.iter()
                .filter(|(m, _)| zero_n(m))
                .map(|(m, c)| c.re * c_integral(m.q()))
                .sum()
        })
        .collect();
    let vd_mean_max = state
        .v_d
        .iter()
        .filter(|(m, _)| zero_n(m))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    ConservedQuantities {
        theta_integral,
        vh_integral,
        vd_mean_max,
    }
}

/// State snapshot plus integration metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub state: StateSnapshot,
    pub stepper: String,
    pub dt_history: Vec<f64>,
}

impl Checkpoint {
    pub fn new(state: &FlowState, stepper: &str, dt_history: Vec<f64>) -> Self {
        Self {
            state: StateSnapshot::from_state(state),
            stepper: stepper.to_string(),
            dt_history,
        }
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
