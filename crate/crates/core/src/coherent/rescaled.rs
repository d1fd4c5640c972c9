use super::label::CoherentLabel;
use super::state::coherent_state;
use crate::error::{Error, Result};
use crate::operator::StateVector;
use crate::projector::Projector;

/// Below this `||E|p,q>||` the label counts as annihilated by the projector.
pub const ANNIHILATION_THRESHOLD: f64 = 1e-13;

/// Unit vector `E|p,q> / ||E|p,q>||` together with the norm `M`.
#[derive(Debug, Clone)]
pub struct RescaledState<'a> {
    pub base: CoherentLabel,
    pub projector: &'a Projector,
    pub state: StateVector,
    pub norm: f64,
}

impl RescaledState<'_> {
    /// `<<self|other>>`.
    pub fn inner(&self, other: &RescaledState<'_>) -> num_complex::Complex64 {
        self.state.inner(&other.state)
    }
}

pub fn rescaled_state<'a>(label: &CoherentLabel, e: &'a Projector) -> Result<RescaledState<'a>> {
    let ket = coherent_state(e.space(), label)?;
    let projected = e.operator().apply(&ket)?;
    let norm = projected.norm();
    if norm <= ANNIHILATION_THRESHOLD {
        return Err(Error::AnnihilatedLabel { norm });
    }
    let state = StateVector::new(e.space().clone(), projected.amplitudes.unscale(norm));
    Ok(RescaledState {
        base: label.clone(),
        projector: e,
        state,
        norm,
    })
}
