use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{Method, Projector};
use crate::error::{Error, Result};
use crate::operator::{hermitian_eigendecomposition, OperatorMatrix};

/// Largest distance of an eigenvalue from the nearest integer.
const INTEGRALITY_TOLERANCE: f64 = 1e-8;

/// Discrete U(1) average `E = (1/K) sum_k exp(-i 2 pi k Phi / K)`.
///
/// `Phi` must have an integer spectrum. Exact when `K > 2 max|lambda|`;
/// coarser averages also keep eigenvalues that are multiples of `K`, and the
/// result is returned with `aliased` set.
pub fn projector_group_average_u1(phi: &OperatorMatrix, k: usize) -> Result<Projector> {
    if k == 0 {
        return Err(Error::InvalidArgument("group average needs K >= 1".into()));
    }
    let eig = hermitian_eigendecomposition(phi)?;
    let mut max_abs = 0_i64;
    for &lambda in &eig.eigenvalues {
        let deviation = (lambda - lambda.round()).abs();
        if deviation > INTEGRALITY_TOLERANCE {
            return Err(Error::NonIntegerSpectrum { deviation });
        }
        max_abs = max_abs.max(lambda.round().abs() as i64);
    }
    // The sum over k is diagonal in the eigenbasis of Phi.
    let average = |lambda: f64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..k {
            acc += Complex64::from_polar(1.0, -TAU * j as f64 * lambda / k as f64);
        }
        acc / k as f64
    };
    let matrix = eig.apply(average);
    let mut e = Projector::from_matrix(phi.space().clone(), matrix, Method::GroupAverageU1)?;
    e.aliased = (k as i64) < 2 * max_abs + 1;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fock::FockSpace;
    use crate::operator::{angular_momentum, number_operator, quadrature_operators};

    #[test]
    fn two_mode_rotation_average() {
        let space = Arc::new(FockSpace::total_quanta(2, 6).unwrap());
        let l3 = angular_momentum(&space).unwrap();
        let e = projector_group_average_u1(&l3, 13).unwrap();
        assert!(e.is_valid());
        // L3 = 0 states: one per even total quanta level 0, 2, 4, 6.
        assert_eq!(e.rank, 4);
        let le = l3.try_mul(e.operator()).unwrap();
        assert!(le.spectral_norm() < 1e-10);
    }

    #[test]
    fn number_operator_average_is_vacuum() {
        let space = Arc::new(FockSpace::single_mode(5).unwrap());
        let n = number_operator(&space, 0).unwrap();
        let e = projector_group_average_u1(&n, 11).unwrap();
        assert!(!e.aliased);
        assert!(super::super::vacuum_projector_deviation(&e, 0).unwrap() < 1e-12);
    }

    #[test]
    fn too_few_nodes_are_flagged() {
        let space = Arc::new(FockSpace::single_mode(5).unwrap());
        let n = number_operator(&space, 0).unwrap();
        let e = projector_group_average_u1(&n, 3).unwrap();
        assert!(e.aliased);
        assert!(!e.is_valid());
        // keeps n = 0 and n = 3
        assert_eq!(e.rank, 2);
    }

    #[test]
    fn rejects_non_integer_spectrum_and_zero_nodes() {
        let space = Arc::new(FockSpace::single_mode(5).unwrap());
        let (q, _) = quadrature_operators(&space, 0).unwrap();
        assert!(matches!(
            projector_group_average_u1(&q, 8),
            Err(Error::NonIntegerSpectrum { .. })
        ));
        let n = number_operator(&space, 0).unwrap();
        assert!(projector_group_average_u1(&n, 0).is_err());
    }
}
