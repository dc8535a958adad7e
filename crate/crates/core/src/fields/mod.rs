//! Flow state, spectral norms and state validation.

mod norm;
mod snapshot;
mod state;
mod validate;

pub use norm::{mode_weight, project_mean_free, sobolev_norm, NormSpec};
pub use snapshot::StateSnapshot;
pub use state::{Alpha, FlowState};
pub use validate::{ingest_grid, validate_state, Check, ValidationReport};
