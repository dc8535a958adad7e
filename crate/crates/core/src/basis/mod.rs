//! Mode indexing, transforms, derivatives and dealiased products.

mod eval;
mod field;
mod mode;
mod ops;
mod transform;

pub use eval::{b_integral, b_profile, c_integral, c_norm_sq, c_profile, evaluate_basis, vertical_sign};
pub use field::SpectralField;
pub use mode::{BasisKind, ModeIndex, Truncation};
pub use ops::{derivative, product, Axis};
pub use transform::{PhysicalGrid, Transformer};
