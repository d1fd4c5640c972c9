use std::sync::Arc;

use csquant::bessel::bessel_i0;
use csquant::fock::FockSpace;
use csquant::linalg::{self, CMatrix};
use csquant::operator::{
    annihilation, commutator, creation, hermitian_eigendecomposition, unitary_evolution,
    OperatorMatrix,
};
use csquant::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(space: &Arc<FockSpace>, seed: u64) -> OperatorMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = space.dimension();
    let m = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    OperatorMatrix::hermitian(space.clone(), linalg::hermitian_part(&m)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_unitary(seed in 0u64..1000, t in 0.0f64..10.0, n in 1usize..6) {
        let space = Arc::new(FockSpace::total_quanta(2, n).unwrap());
        let h = random_hermitian(&space, seed);
        let u = unitary_evolution(&h, t).unwrap();
        let (ok, residual) = linalg::unitarity_defect(u.matrix(), 1e-12);
        prop_assert!(ok, "residual {residual}");
        prop_assert!((u.spectral_norm() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn eigendecomposition_round_trip_up_to_d_500() {
    for (n, seed) in [(4, 1), (13, 2), (30, 3)] {
        let space = Arc::new(FockSpace::total_quanta(2, n).unwrap());
        let h = random_hermitian(&space, seed);
        let eig = hermitian_eigendecomposition(&h).unwrap();
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = eig.apply(|l| Complex64::new(l, 0.0));
        let err = linalg::spectral_norm(&(rebuilt - h.matrix()));
        assert!(
            err <= 1e-12 * h.spectral_norm().max(1.0) * 10.0,
            "D={} err={err}",
            space.dimension()
        );
    }
}

/// Miller's downward recurrence normalized by `I0 + 2 sum I_n = e^x`.
fn miller_i0(x: f64) -> f64 {
    let start = 60 + (2.0 * x) as usize;
    let (mut next, mut current) = (0.0_f64, 1e-30_f64);
    let mut sum = 0.0;
    for n in (1..=start).rev() {
        sum += current;
        let previous = (2.0 * n as f64 / x) * current + next;
        next = current;
        current = previous;
        if current > 1e250 {
            next *= 1e-250;
            current *= 1e-250;
            sum *= 1e-250;
        }
    }
    current * x.exp() / (current + 2.0 * sum)
}

#[test]
fn bessel_matches_miller_recurrence() {
    for k in 1..=100 {
        let x = 0.1 * k as f64;
        let series = bessel_i0(Complex64::new(x, 0.0)).unwrap();
        let oracle = miller_i0(x);
        assert!(
            (series.re - oracle).abs() <= 1e-13 * oracle,
            "x={x}: {} vs {oracle}",
            series.re
        );
        assert_eq!(series.im, 0.0);
    }
    assert_eq!(
        bessel_i0(Complex64::new(0.0, 0.0)).unwrap(),
        Complex64::new(1.0, 0.0)
    );
}

#[test]
fn canonical_commutator_on_interior() {
    let space = Arc::new(FockSpace::per_mode(&[5, 3]).unwrap());
    let a = annihilation(&space, 1).unwrap();
    let ad = creation(&space, 1).unwrap();
    let c = commutator(&a, &ad).unwrap();
    for i in space.interior_indices() {
        assert!((c.matrix()[(i, i)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn dimension_ceiling_is_enforced() {
    assert!(matches!(
        FockSpace::per_mode(&[1000, 1000]),
        Err(Error::DimensionCeiling { .. })
    ));
    assert!(FockSpace::total_quanta(2, 40).is_ok());
}
