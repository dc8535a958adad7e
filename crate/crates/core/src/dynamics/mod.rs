//! Nonlinear dynamics: projection, tendencies and time stepping.

mod conserved;
mod nonlinear;
mod projection;
mod stepper;

pub use conserved::{conserved_quantities, Checkpoint, ConservedQuantities};
pub use nonlinear::{advection, nonlinear_rhs, Advection, Tendency};
pub use projection::{leray_project, pressure_gradient};
pub use stepper::{
    stepper_by_name, Dynamics, ExplicitBuoyancy, IfEuler, IfMidpoint, Stepper, STEPPER_NAMES,
};
