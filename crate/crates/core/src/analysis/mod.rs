//! Reductions of simulation traces and recorded signals.

mod envelope;
mod filter;
mod phase;
mod rms;
mod stats;

pub use envelope::{emg_envelope, EnvelopeParams};
pub use filter::{Biquad, Sos};
pub use phase::{phase_average, phase_average_series, PhaseProfile, DEFAULT_PHASE_BINS};
pub use rms::{rms_components, RmsComponents, RmsRow, RmsTable};
pub use stats::{mean, pearson_r, rms};
