use num_complex::Complex64;

use crate::bessel::bessel_i0;
use crate::coherent::{coherent_state, CoherentLabel, Convention, DEFAULT_LABEL_GUARD};
use crate::error::{Error, Result};
use crate::fock::Truncation;
use crate::operator::OperatorMatrix;

/// Coherent-state matrix elements of an operator over a list of label pairs.
#[derive(Debug, Clone)]
pub struct KernelReport {
    /// `(label'', label')` per entry.
    pub labels: Vec<(CoherentLabel, CoherentLabel)>,
    pub matrix_values: Vec<Complex64>,
    pub closed_form_values: Option<Vec<Complex64>>,
    /// Largest `|matrix - closed form|`, when closed forms are attached.
    pub abs_error: Option<f64>,
    /// Largest `|matrix - closed form| / max(|closed form|, 1e-300)`.
    pub rel_error: Option<f64>,
    pub cutoff: Truncation,
}

impl KernelReport {
    /// Attach closed-form values and compute the errors.
    pub fn with_closed_form(
        mut self,
        f: impl Fn(&CoherentLabel, &CoherentLabel) -> Result<Complex64>,
    ) -> Result<Self> {
        let values = self
            .labels
            .iter()
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        let mut abs = 0.0_f64;
        let mut rel = 0.0_f64;
        for (m, c) in self.matrix_values.iter().zip(&values) {
            let d = (m - c).norm();
            abs = abs.max(d);
            rel = rel.max(d / c.norm().max(1e-300));
        }
        self.closed_form_values = Some(values);
        self.abs_error = Some(abs);
        self.rel_error = Some(rel);
        Ok(self)
    }
}

/// `<label''| op |label'>` with Weyl-convention states (labels in the canonical
/// convention are converted), each `|z_j|` at most [`DEFAULT_LABEL_GUARD`].
pub fn kernel_grid(
    op: &OperatorMatrix,
    labels: &[(CoherentLabel, CoherentLabel)],
) -> Result<KernelReport> {
    let space = op.space();
    let mut values = Vec::with_capacity(labels.len());
    let mut echoed = Vec::with_capacity(labels.len());
    for (bra, ket) in labels {
        let bra = bra.with_convention(Convention::Weyl);
        let ket = ket.with_convention(Convention::Weyl);
        bra.check_guard(DEFAULT_LABEL_GUARD)?;
        ket.check_guard(DEFAULT_LABEL_GUARD)?;
        let b = coherent_state(space, &bra)?;
        let k = coherent_state(space, &ket)?;
        values.push(op.matrix_element(&b, &k)?);
        echoed.push((bra, ket));
    }
    Ok(KernelReport {
        labels: echoed,
        matrix_values: values,
        closed_form_values: None,
        abs_error: None,
        rel_error: None,
        cutoff: space.scheme().clone(),
    })
}

/// Reproducing kernel of the rotation-invariant subspace of two modes:
/// `exp(-(|z''|^2 + |z'|^2)/2) I0(sqrt((z''_1*^2 + z''_2*^2)(z'_1^2 + z'_2^2)))`
/// between Weyl states. Canonical labels pick up their bridge phases.
pub fn example1_closed_form(bra: &CoherentLabel, ket: &CoherentLabel) -> Result<Complex64> {
    for label in [bra, ket] {
        if label.modes() != 2 {
            return Err(Error::LabelArity {
                expected: 2,
                got: label.modes(),
            });
        }
    }
    let zb = bra.amplitudes();
    let zk = ket.amplitudes();
    let left = zb[0].conj().powu(2) + zb[1].conj().powu(2);
    let right = zk[0].powu(2) + zk[1].powu(2);
    // I0 is even, so the branch of the square root does not matter.
    let bessel = bessel_i0((left * right).sqrt())?;
    let envelope = (-0.5 * (bra.squared_norm() + ket.squared_norm())).exp();
    let weyl = bessel * envelope;
    Ok(match (bra.convention, ket.convention) {
        (Convention::Weyl, Convention::Weyl) => weyl,
        _ => bra.bridge_phase().conj() * weyl * ket.bridge_phase(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fock::FockSpace;
    use crate::operator::angular_momentum;
    use crate::projector::projector_group_average_u1;

    fn z(re1: f64, im1: f64, re2: f64, im2: f64) -> CoherentLabel {
        CoherentLabel::from_amplitudes(
            &[Complex64::new(re1, im1), Complex64::new(re2, im2)],
            Convention::Weyl,
        )
    }

    #[test]
    fn closed_form_values() {
        let o = z(0.0, 0.0, 0.0, 0.0);
        assert!((example1_closed_form(&o, &o).unwrap() - 1.0).norm() < 1e-15);
        let x = z(1.0, 0.0, 0.0, 0.0);
        let y = z(0.0, 0.0, 1.0, 0.0);
        let expected = (-1.0_f64).exp() * 1.2660658777520084;
        assert!((example1_closed_form(&x, &x).unwrap().re - expected).abs() < 1e-14);
        assert!((example1_closed_form(&x, &y).unwrap().re - expected).abs() < 1e-14);
        assert!((expected - 0.4657596).abs() < 1e-7);
    }

    #[test]
    fn matrix_kernel_matches_closed_form() {
        let space = Arc::new(FockSpace::total_quanta(2, 30).unwrap());
        let l3 = angular_momentum(&space).unwrap();
        let e = projector_group_average_u1(&l3, 61).unwrap();
        let pairs = vec![
            (z(0.0, 0.0, 0.0, 0.0), z(0.0, 0.0, 0.0, 0.0)),
            (z(1.0, 0.0, 0.0, 0.0), z(1.0, 0.0, 0.0, 0.0)),
            (z(1.0, 0.0, 0.0, 0.0), z(0.0, 0.0, 1.0, 0.0)),
            (z(0.3, -0.5, 0.2, 0.6), z(-0.4, 0.1, 0.7, -0.2)),
        ];
        let report = kernel_grid(e.operator(), &pairs)
            .unwrap()
            .with_closed_form(example1_closed_form)
            .unwrap();
        assert!(report.abs_error.unwrap() <= 1e-8, "{:?}", report.abs_error);
        assert!((report.matrix_values[0].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_kernel_is_truncated_norm() {
        let space = Arc::new(FockSpace::total_quanta(2, 6).unwrap());
        let id = OperatorMatrix::identity(space.clone());
        let x = z(0.8, 0.2, -0.5, 0.4);
        let report = kernel_grid(&id, &[(x.clone(), x.clone())]).unwrap();
        let deficit = coherent_state(&space, &x).unwrap().norm_deficit;
        assert!((report.matrix_values[0].re - (1.0 - deficit)).abs() < 1e-14);
    }

    #[test]
    fn guard_and_arity() {
        let space = Arc::new(FockSpace::total_quanta(2, 4).unwrap());
        let id = OperatorMatrix::identity(space);
        let far = z(4.0, 0.0, 0.0, 0.0);
        assert!(kernel_grid(&id, &[(far.clone(), far)]).is_err());
        let one = CoherentLabel::weyl(vec![0.0], vec![0.0]).unwrap();
        assert!(example1_closed_form(&one, &one).is_err());
    }
}
