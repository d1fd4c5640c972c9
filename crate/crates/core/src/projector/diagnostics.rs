use serde::Serialize;

use super::{ConstraintFlow, Projector};
use crate::error::Result;
use crate::linalg;

#[derive(Debug, Clone, Serialize)]
pub struct ProjectorReport {
    pub idempotency: f64,
    pub hermiticity: f64,
    pub rank: usize,
    pub trace: f64,
    /// `max_tau ||exp(-i tau^a Phi_a) E - E||`; `None` without constraints or taus.
    pub invariance: Option<f64>,
}

/// Projector residuals plus the invariance `exp(-i tau^a Phi_a) E = E` over
/// the supplied `taus`. Large invariance residuals are reported, not treated
/// as failures: second-class projectors are not invariant.
pub fn projector_diagnostics(
    e: &Projector,
    constraints: Option<&dyn ConstraintFlow>,
    taus: &[Vec<f64>],
) -> Result<ProjectorReport> {
    let square = linalg::matmul(e.matrix(), e.matrix());
    let idempotency = linalg::spectral_norm(&linalg::hermitian_part(&(square - e.matrix())));
    let mut invariance = None;
    if let Some(flow) = constraints {
        if flow.axes() > 0 && !taus.is_empty() {
            let mut worst = 0.0_f64;
            for tau in taus {
                let u = flow.exponential(tau)?;
                let moved = linalg::matmul(&u, e.matrix());
                worst = worst.max(linalg::spectral_norm(&(moved - e.matrix())));
            }
            invariance = Some(worst);
        }
    }
    Ok(ProjectorReport {
        idempotency,
        hermiticity: e.hermiticity_residual,
        rank: e.rank,
        trace: e.trace,
        invariance,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fock::FockSpace;
    use crate::operator::angular_momentum;
    use crate::projector::{projector_group_average_u1, CanonicalPairFlow, ConstraintSet};

    #[test]
    fn rotation_invariance() {
        let space = Arc::new(FockSpace::total_quanta(2, 6).unwrap());
        let l3 = angular_momentum(&space).unwrap();
        let e = projector_group_average_u1(&l3, 13).unwrap();
        let cs = ConstraintSet::new(vec![l3]).unwrap();
        let taus = vec![vec![0.3], vec![1.7], vec![5.0]];
        let r = projector_diagnostics(&e, Some(&cs), &taus).unwrap();
        assert!(r.invariance.unwrap() <= 1e-10);
        assert!(r.idempotency <= 1e-10);
    }

    #[test]
    fn identity_without_constraints() {
        let space = Arc::new(FockSpace::single_mode(4).unwrap());
        let e = Projector::identity(space.clone());
        let r = projector_diagnostics(&e, None, &[]).unwrap();
        assert_eq!(r.idempotency, 0.0);
        assert_eq!(r.hermiticity, 0.0);
        assert!(r.invariance.is_none());
        let empty = ConstraintSet::empty(space);
        let r = projector_diagnostics(&e, Some(&empty), &[vec![]]).unwrap();
        assert!(r.invariance.is_none());
    }

    #[test]
    fn second_class_projector_is_not_invariant() {
        let space = Arc::new(FockSpace::single_mode(12).unwrap());
        let e = Projector::mode_vacuum(space.clone(), 0).unwrap();
        let flow = CanonicalPairFlow::new(space, 0).unwrap();
        let r = projector_diagnostics(&e, Some(&flow), &[vec![1.0, 0.5]]).unwrap();
        // ||D|0> - |0>|| is order one for |alpha|^2 = 0.625
        assert!(r.invariance.unwrap() > 0.3);
    }
}
