//! Per-mode eigenstructure and exact propagation of the linearized system
//! `u' = -M u`, `u = (v_d, theta)`, together with the forced `v_h` equation.

mod eigen;
mod envelope;
mod phi;
mod propagate;
mod table;

pub use eigen::{classify_region, eigensystem, ModeEigenSystem, Region};
pub use envelope::{decay_envelope, predicted_slope, EnvelopeKind};
pub use phi::{divided_difference2, phi1};
pub use propagate::{
    propagate_linear, propagate_mode, ModePropagator, PropagatorTable,
};
pub use table::{eigen_table, write_eigen_csv, EIGEN_CSV_HEADER};
