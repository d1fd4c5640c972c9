//! Canonical coherent states on a truncated Fock space.
//!
//! States are built from their closed-form number-basis coefficients, not by
//! exponentiating truncated generators, so the only truncation error is the
//! discarded tail recorded in [`StateVector::norm_deficit`](crate::StateVector).

mod geometric;
mod label;
mod rescaled;
mod state;
mod unity;

pub use geometric::{
    geometric_one_form_check, CircularPath, GeometricReport, LabelPath, OneFormSample,
};
pub use label::{CoherentLabel, Convention, DEFAULT_LABEL_GUARD};
pub use rescaled::{rescaled_state, RescaledState, ANNIHILATION_THRESHOLD};
pub use state::{coherent_state, overlap_bridged, overlap_closed_form, upper_symbol};
pub use unity::{unity_resolution_operator, unity_resolution_residual};
