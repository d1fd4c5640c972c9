//! Second-class example: a free pair `(p, q)` times a constrained pair `(r, s)`
//! with `E = I (x) |0><0|`.

use std::f64::consts::PI;
use std::sync::Arc;

use super::evolution::evolve_projected_exact;
use crate::coherent::{
    coherent_state, overlap_closed_form, upper_symbol, CoherentLabel, Convention,
};
use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::linalg::CMatrix;
use crate::operator::{unitary_evolution, OperatorMatrix};
use crate::projector::{vacuum_projector_deviation, Projector};
use crate::quadrature::PhaseSpaceGrid;

const FORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Report {
    /// `max |<x|EHE|x>/<x|E|x> - H(p, q, 0, 0)|` over the symbol labels.
    pub symbol_residual: f64,
    /// `max |K_full(T) - K_reduced(T) <r'',s''|0><0|r',s'>|` over all kernel
    /// label pairs.
    pub factorization_residual: f64,
}

fn split(label: &CoherentLabel) -> Result<(CoherentLabel, CoherentLabel)> {
    if label.modes() != 2 {
        return Err(Error::LabelArity {
            expected: 2,
            got: label.modes(),
        });
    }
    let c = label.convention;
    Ok((
        CoherentLabel::new(vec![label.p[0]], vec![label.q[0]], c)?,
        CoherentLabel::new(vec![label.p[1]], vec![label.q[1]], c)?,
    ))
}

/// `<0| H |0>` on mode 1, as an operator on mode 0 alone.
pub fn reduced_hamiltonian(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    let space = h.space();
    if space.modes() != 2 {
        return Err(Error::InvalidArgument(format!(
            "reduction needs two modes, got {}",
            space.modes()
        )));
    }
    let top = space.max_occupation(0);
    let reduced = Arc::new(FockSpace::single_mode(top)?);
    let rows: Vec<usize> = (0..=top)
        .map(|n| {
            space
                .flatten(&[n, 0])
                .ok_or_else(|| Error::InvalidArgument(format!("state ({n}, 0) not admitted")))
        })
        .collect::<Result<_>>()?;
    let m = CMatrix::from_fn(top + 1, top + 1, |r, c| h.matrix()[(rows[r], rows[c])]);
    let op = OperatorMatrix::new(reduced, m)?;
    if h.is_hermitian() {
        op.into_hermitian()
    } else {
        Ok(op)
    }
}

/// Symbol and propagator factorization checks for the projector onto the
/// vacuum of mode 1. Labels are two-mode `(p, q; r, s)` points; canonical
/// conventions are expected for the propagator comparison.
pub fn example2_factorization(
    h: &OperatorMatrix,
    e: &Projector,
    symbol_labels: &[CoherentLabel],
    kernel_labels: &[CoherentLabel],
    t: f64,
) -> Result<Example2Report> {
    h.same_space(e.operator())?;
    let deviation = vacuum_projector_deviation(e, 1)?;
    if deviation > FORM_TOLERANCE {
        return Err(Error::ProjectorForm { deviation });
    }
    let space = h.space();

    let ehe = e.operator().try_mul(h)?.try_mul(e.operator())?;
    let mut symbol_gap = 0.0_f64;
    for label in symbol_labels {
        let x = coherent_state(space, label)?;
        let weight = e.operator().matrix_element(&x, &x)?;
        let symbol = ehe.matrix_element(&x, &x)? / weight;
        let mut free = label.clone();
        free.p[1] = 0.0;
        free.q[1] = 0.0;
        symbol_gap = symbol_gap.max((symbol - upper_symbol(h, &free)?).norm());
    }

    let mut factorization = 0.0_f64;
    if !kernel_labels.is_empty() {
        let full = evolve_projected_exact(h, e, t)?;
        let h_eff = reduced_hamiltonian(h)?;
        let reduced = unitary_evolution(&h_eff, t)?;
        let vacuum = CoherentLabel::origin(1, Convention::Canonical);
        let states = kernel_labels
            .iter()
            .map(|l| coherent_state(space, l))
            .collect::<Result<Vec<_>>>()?;
        let parts = kernel_labels
            .iter()
            .map(split)
            .collect::<Result<Vec<_>>>()?;
        let reduced_states = parts
            .iter()
            .map(|(free, _)| coherent_state(h_eff.space(), free))
            .collect::<Result<Vec<_>>>()?;
        for (i, bra) in states.iter().enumerate() {
            for (j, ket) in states.iter().enumerate() {
                let k_full = full.matrix_element(bra, ket)?;
                let k_red = reduced.matrix_element(&reduced_states[i], &reduced_states[j])?;
                let constrained = overlap_closed_form(&parts[i].1, &vacuum)?
                    * overlap_closed_form(&vacuum, &parts[j].1)?;
                factorization = factorization.max((k_full - k_red * constrained).norm());
            }
        }
    }
    Ok(Example2Report {
        symbol_residual: symbol_gap,
        factorization_residual: factorization,
    })
}

/// `int |<0|r,s>|^2 dr ds / 2pi` by the trapezoid rule on `grid`.
pub fn vacuum_overlap_normalization(grid: &PhaseSpaceGrid) -> Result<f64> {
    let vacuum = CoherentLabel::origin(1, Convention::Canonical);
    let mut total = 0.0;
    let mut err = None;
    grid.for_each(1, |p, q, w| {
        match CoherentLabel::canonical(p.to_vec(), q.to_vec())
            .and_then(|l| overlap_closed_form(&vacuum, &l))
        {
            Ok(v) => total += w * v.norm_sqr(),
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(total / (2.0 * PI)),
    }
}
