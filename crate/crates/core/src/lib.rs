//! Spectral solver and verification toolkit for the perturbed, linearly
//! stratified Boussinesq system on the strip `T^{d-1} x [-1, 1]`.
//!
//! Fields are expanded in the mixed bases
//!
//! * `B_{n,q}(x) = exp(2 pi i n.x_h) b_q(x_d)` for Dirichlet-type scalars
//!   (vertical velocity, temperature), `q >= 1`;
//! * `C_{n,q}(x) = exp(2 pi i n.x_h) c_q(x_d)` for Neumann-type scalars
//!   (horizontal velocity), `q >= 0`;
//!
//! with `b_q = sin(pi q x_d / 2)` for even `q`, `cos(pi q x_d / 2)` for odd `q`,
//! and `c_q = cos(pi q x_d / 2)` for even `q`, `-sin(pi q x_d / 2)` for odd `q`.
//!
//! The crate is organised bottom-up:
//!
//! * [`basis`]: mode indexing, grid transforms, derivatives and dealiased products;
//! * [`fields`]: flow state, Sobolev-type norms, validation and snapshots;
//! * [`linear`]: per-mode eigenanalysis and exact linear propagation;
//! * [`dynamics`]: pressure, Leray projection, nonlinear tendencies and steppers;
//! * [`diagnostics`]: energies, key-quantity accumulators, the asymptotic
//!   temperature profile and decay-rate fitting.

pub mod basis;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod linear;

pub use error::{Error, Result};
pub use num_complex::Complex64;
