use std::f64::consts::PI;
use std::sync::Arc;

use super::label::CoherentLabel;
use super::state::coherent_state;
use crate::error::Result;
use crate::fock::FockSpace;
use crate::linalg::{self, CMatrix};
use crate::quadrature::PhaseSpaceGrid;

/// `sum_grid w |p,q><p,q| / (2 pi)^J` restricted to the basis states in
/// `subspace` (rows and columns).
pub fn unity_resolution_operator(
    space: &Arc<FockSpace>,
    grid: &PhaseSpaceGrid,
    subspace: &[usize],
) -> Result<CMatrix> {
    let modes = space.modes();
    let k = subspace.len();
    let mut acc = CMatrix::zeros(k, k);
    if k == 0 {
        return Ok(acc);
    }
    let norm = (2.0 * PI).powi(modes as i32);
    let mut err = None;
    grid.for_each(modes, |p, q, w| {
        if err.is_some() {
            return;
        }
        let label = match CoherentLabel::weyl(p.to_vec(), q.to_vec()) {
            Ok(l) => l,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        match coherent_state(space, &label) {
            Ok(state) => {
                let v: Vec<_> = subspace.iter().map(|&i| state.amplitudes[i]).collect();
                let w = w / norm;
                for c in 0..k {
                    let vc = v[c].conj() * w;
                    for r in 0..k {
                        acc[(r, c)] += v[r] * vc;
                    }
                }
            }
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(acc),
    }
}

/// Spectral-norm residual of the quadrature resolution of unity on the basis
/// states in `subspace`. An empty subspace gives zero.
///
/// Only amplitudes on the subspace enter, and those are exact closed-form
/// coefficients, so the residual measures quadrature error alone.
pub fn unity_resolution_residual(
    space: &Arc<FockSpace>,
    grid: &PhaseSpaceGrid,
    subspace: &[usize],
) -> Result<f64> {
    if subspace.is_empty() {
        return Ok(0.0);
    }
    let s = unity_resolution_operator(space, grid, subspace)?;
    let k = subspace.len();
    Ok(linalg::spectral_norm(&(s - linalg::identity(k))))
}
