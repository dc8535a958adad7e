//! Energy functionals, accumulators, the asymptotic profile and slope fits.

mod energy;
mod fit;
mod record;
mod sigma;

pub use energy::{cross_a, energy_e, BmAccumulator, KeyQuantities};
pub use fit::{fit_decay_exponent, DecayFit};
pub use record::{RunRecord, SlopeRecord};
pub use sigma::{sigma_profile, FluxSample, SigmaProfile};
