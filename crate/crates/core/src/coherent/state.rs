use std::sync::Arc;

use num_complex::Complex64;

use super::label::{CoherentLabel, Convention};
use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::linalg::CVector;
use crate::operator::{OperatorMatrix, StateVector};

/// Coherent state `|p,q>` restricted to the admitted basis states.
///
/// Coefficients are `exp(-|z|^2/2) prod_j z_j^{n_j}/sqrt(n_j!)` (times the
/// canonical bridge phase when requested). The vector is left unnormalized and
/// the discarded mass is recorded as `norm_deficit`.
pub fn coherent_state(space: &Arc<FockSpace>, label: &CoherentLabel) -> Result<StateVector> {
    if label.modes() != space.modes() {
        return Err(Error::LabelArity {
            expected: space.modes(),
            got: label.modes(),
        });
    }
    let z = label.amplitudes();
    // per-mode tables z^n / sqrt(n!)
    let tables: Vec<Vec<Complex64>> = z
        .iter()
        .enumerate()
        .map(|(j, &zj)| {
            let top = space.max_occupation(j);
            let mut t = Vec::with_capacity(top + 1);
            let mut c = Complex64::new(1.0, 0.0);
            t.push(c);
            for n in 1..=top {
                c *= zj / (n as f64).sqrt();
                t.push(c);
            }
            t
        })
        .collect();
    let prefactor = label.bridge_phase() * (-0.5 * label.squared_norm()).exp();
    let amplitudes = CVector::from_iterator(
        space.dimension(),
        space.basis().map(|n| {
            n.iter()
                .enumerate()
                .fold(prefactor, |acc, (j, &nj)| acc * tables[j][nj])
        }),
    );
    let norm_sq = amplitudes.norm_squared();
    let mut state = StateVector::new(space.clone(), amplitudes);
    state.norm_deficit = (1.0 - norm_sq).max(0.0);
    state.truncated_analytic = true;
    Ok(state)
}

fn weyl_overlap(a: &CoherentLabel, b: &CoherentLabel) -> Result<Complex64> {
    if a.modes() != b.modes() {
        return Err(Error::LabelArity {
            expected: a.modes(),
            got: b.modes(),
        });
    }
    let za = a.amplitudes();
    let zb = b.amplitudes();
    let cross: Complex64 = za.iter().zip(&zb).map(|(x, y)| x.conj() * y).sum();
    Ok((cross - 0.5 * a.squared_norm() - 0.5 * b.squared_norm()).exp())
}

/// Closed-form `<a|b> = exp(-|z_a|^2/2 + z_a* . z_b - |z_b|^2/2)` for two
/// labels in the same convention (canonical pairs pick up the bridge phases).
pub fn overlap_closed_form(a: &CoherentLabel, b: &CoherentLabel) -> Result<Complex64> {
    if a.convention != b.convention {
        return Err(Error::ConventionMismatch);
    }
    overlap_bridged(a, b)
}

/// Closed-form overlap for labels in any mix of conventions.
pub fn overlap_bridged(a: &CoherentLabel, b: &CoherentLabel) -> Result<Complex64> {
    let w = weyl_overlap(a, b)?;
    Ok(match (a.convention, b.convention) {
        (Convention::Weyl, Convention::Weyl) => w,
        _ => a.bridge_phase().conj() * w * b.bridge_phase(),
    })
}

/// Upper symbol `<p,q|H|p,q> / <p,q|p,q>`.
///
/// Dividing by the truncated norm compensates the discarded tail.
pub fn upper_symbol(h: &OperatorMatrix, label: &CoherentLabel) -> Result<Complex64> {
    let state = coherent_state(h.space(), label)?;
    let norm_sq = state.inner(&state).re;
    if norm_sq <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(h.matrix_element(&state, &state)? / norm_sq)
}
