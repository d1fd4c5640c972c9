//! Lattice propagators with intermediate phase-space resolutions, evaluated
//! once with bare coherent states and projectors and once with rescaled states
//! and their measure weights.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coherent::{coherent_state, rescaled_state, CoherentLabel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::operator::{unitary_evolution, OperatorMatrix};
use crate::projector::Projector;
use crate::quadrature::PhaseSpaceGrid;

/// Largest accepted `grid points x D^2` work estimate.
pub const LATTICE_BUDGET: f64 = 5e9;

#[derive(Debug, Clone)]
pub struct LatticeReport {
    /// Projector form: `<x''| E U E S E U E ... |x'>` with `S` the quadrature
    /// resolution of unity.
    pub projector_form: Vec<Complex64>,
    /// Rescaled form: `M'' M' <<x''| U S_E U ... |x'>>` with
    /// `S_E = sum w M^2 |x>><<x| / (2 pi)^J`.
    pub rescaled_form: Vec<Complex64>,
    /// `<x''| E (U E)^N |x'>` without intermediate resolutions.
    pub matrix_product: Vec<Complex64>,
    /// `max |projector_form - rescaled_form|`.
    pub residual: f64,
    /// `max |projector_form - matrix_product|`, the resolution quadrature error.
    pub quadrature_deviation: f64,
}

fn chain(first: &CMatrix, step: &CMatrix, repeats: usize) -> CMatrix {
    let mut acc = first.clone();
    for _ in 0..repeats {
        acc = linalg::matmul(&acc, step);
    }
    acc
}

/// Compare the two lattice forms of the projected propagator over `slices`
/// time steps (`slices - 1` intermediate resolutions on `grid`) between the
/// endpoint label pairs `(x'', x')`.
pub fn lattice_equivalence_check(
    h: &OperatorMatrix,
    e: &Projector,
    labels: &[(CoherentLabel, CoherentLabel)],
    t: f64,
    slices: usize,
    grid: &PhaseSpaceGrid,
) -> Result<LatticeReport> {
    if slices == 0 {
        return Err(Error::TrotterPlan("at least one slice is required".into()));
    }
    h.same_space(e.operator())?;
    let space = h.space();
    let d = space.dimension();
    let modes = space.modes();
    let required = if slices > 1 {
        grid.point_count(modes) * (d * d) as f64
    } else {
        0.0
    };
    if required > LATTICE_BUDGET {
        return Err(Error::QuadratureBudget {
            required,
            budget: LATTICE_BUDGET,
        });
    }

    let u = unitary_evolution(h, t / slices as f64)?;
    let em = e.matrix();
    let eue = linalg::matmul(&linalg::matmul(em, u.matrix()), em);

    // Resolutions of unity with bare and rescaled states.
    let norm = (2.0 * PI).powi(modes as i32);
    let mut s = CMatrix::zeros(d, d);
    let mut s_e = CMatrix::zeros(d, d);
    if slices > 1 {
        let mut err = None;
        grid.for_each(modes, |p, q, w| {
            if err.is_some() {
                return;
            }
            let result = (|| -> Result<()> {
                let label = CoherentLabel::canonical(p.to_vec(), q.to_vec())?;
                let bare = coherent_state(space, &label)?;
                let v = &bare.amplitudes;
                s.ger(
                    Complex64::new(w / norm, 0.0),
                    v,
                    &v.conjugate(),
                    Complex64::new(1.0, 0.0),
                );
                match rescaled_state(&label, e) {
                    Ok(r) => {
                        let v = &r.state.amplitudes;
                        let weight = w * r.norm * r.norm / norm;
                        s_e.ger(
                            Complex64::new(weight, 0.0),
                            v,
                            &v.conjugate(),
                            Complex64::new(1.0, 0.0),
                        );
                        Ok(())
                    }
                    Err(Error::AnnihilatedLabel { .. }) => Ok(()),
                    Err(other) => Err(other),
                }
            })();
            if let Err(e) = result {
                err = Some(e);
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
    }

    let projector_chain = chain(&eue, &linalg::matmul(&s, &eue), slices - 1);
    let rescaled_chain = chain(u.matrix(), &linalg::matmul(&s_e, u.matrix()), slices - 1);
    let direct_step = linalg::matmul(u.matrix(), em);
    let direct = chain(em, &direct_step, slices);

    let mut projector_form = Vec::with_capacity(labels.len());
    let mut rescaled_form = Vec::with_capacity(labels.len());
    let mut matrix_product = Vec::with_capacity(labels.len());
    let mut residual = 0.0_f64;
    let mut quadrature_deviation = 0.0_f64;
    for (bra, ket) in labels {
        let b = coherent_state(space, bra)?;
        let k = coherent_state(space, ket)?;
        let a = b.amplitudes.dotc(&(&projector_chain * &k.amplitudes));
        let rescaled = match (rescaled_state(bra, e), rescaled_state(ket, e)) {
            (Ok(rb), Ok(rk)) => {
                let inner = rb
                    .state
                    .amplitudes
                    .dotc(&(&rescaled_chain * &rk.state.amplitudes));
                inner * (rb.norm * rk.norm)
            }
            (Err(Error::AnnihilatedLabel { .. }), _) | (_, Err(Error::AnnihilatedLabel { .. })) => {
                ZERO
            }
            (Err(other), _) | (_, Err(other)) => return Err(other),
        };
        let m = b.amplitudes.dotc(&(&direct * &k.amplitudes));
        residual = residual.max((a - rescaled).norm());
        quadrature_deviation = quadrature_deviation.max((a - m).norm());
        projector_form.push(a);
        rescaled_form.push(rescaled);
        matrix_product.push(m);
    }
    Ok(LatticeReport {
        projector_form,
        rescaled_form,
        matrix_product,
        residual,
        quadrature_deviation,
    })
}
