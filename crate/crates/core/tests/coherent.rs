use std::sync::Arc;

use csquant::coherent::{
    coherent_state, geometric_one_form_check, overlap_bridged, overlap_closed_form,
    unity_resolution_residual, upper_symbol, CircularPath, CoherentLabel, Convention, LabelPath,
};
use csquant::fock::FockSpace;
use csquant::operator::{number_operator, quadrature_operators, total_number};
use csquant::projector::Projector;
use csquant::quadrature::PhaseSpaceGrid;
use csquant::Error;
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn truncated_overlaps_match_closed_form(
        p in prop::collection::vec(-1.5f64..1.5, 2),
        q in prop::collection::vec(-1.5f64..1.5, 2),
        p2 in prop::collection::vec(-1.5f64..1.5, 2),
        q2 in prop::collection::vec(-1.5f64..1.5, 2),
        canonical in any::<bool>(),
    ) {
        let space = Arc::new(FockSpace::total_quanta(2, 40).unwrap());
        let conv = if canonical { Convention::Canonical } else { Convention::Weyl };
        let a = CoherentLabel::new(p, q, conv).unwrap();
        let b = CoherentLabel::new(p2, q2, conv).unwrap();
        let sa = coherent_state(&space, &a).unwrap();
        let sb = coherent_state(&space, &b).unwrap();
        let closed = overlap_closed_form(&a, &b).unwrap();
        prop_assert!((sa.inner(&sb) - closed).norm() <= 1e-10);
    }
}

#[test]
fn mixed_conventions_need_the_bridge() {
    let a = CoherentLabel::canonical(vec![0.4], vec![0.9]).unwrap();
    let b = CoherentLabel::weyl(vec![-0.2], vec![0.3]).unwrap();
    assert!(matches!(
        overlap_closed_form(&a, &b),
        Err(Error::ConventionMismatch)
    ));
    let space = Arc::new(FockSpace::single_mode(40).unwrap());
    let direct = coherent_state(&space, &a)
        .unwrap()
        .inner(&coherent_state(&space, &b).unwrap());
    assert!((overlap_bridged(&a, &b).unwrap() - direct).norm() < 1e-12);
}

#[test]
fn resolution_of_unity_default_grid() {
    let space = Arc::new(FockSpace::single_mode(40).unwrap());
    let grid = PhaseSpaceGrid::new(6.0, 64).unwrap();
    let r = unity_resolution_residual(&space, &grid, &space.low_quanta_indices(6)).unwrap();
    assert!(r <= 1e-3, "{r}");
    // a box that clips the Gaussian tails fails the bound
    let narrow = PhaseSpaceGrid::new(2.0, 64).unwrap();
    let r = unity_resolution_residual(&space, &narrow, &space.low_quanta_indices(6)).unwrap();
    assert!(r > 1e-3);
    assert!(PhaseSpaceGrid::new(6.0, 4).is_err());
}

#[test]
fn upper_symbols() {
    let space = Arc::new(FockSpace::total_quanta(2, 40).unwrap());
    let label = CoherentLabel::canonical(vec![0.7, -1.1], vec![1.3, 0.2]).unwrap();
    let z2 = label.squared_norm();
    let n = total_number(&space);
    assert!((upper_symbol(&n, &label).unwrap().re - z2).abs() < 1e-10);
    let (q0, _) = quadrature_operators(&space, 0).unwrap();
    assert!((upper_symbol(&q0, &label).unwrap() - Complex64::new(1.3, 0.0)).norm() < 1e-10);
    let n0 = number_operator(&space, 0).unwrap();
    let combo = n0.scale_real(3.0).try_add(&q0).unwrap();
    let lin = upper_symbol(&combo, &label).unwrap()
        - upper_symbol(&n0, &label).unwrap() * 3.0
        - upper_symbol(&q0, &label).unwrap();
    assert!(lin.norm() < 1e-12);
}

fn two_mode_paths() -> (Projector, [CircularPath; 2]) {
    let space = Arc::new(FockSpace::per_mode(&[12, 12]).unwrap());
    let e = Projector::mode_vacuum(space, 1).unwrap();
    let center = CoherentLabel::canonical(vec![0.3, 0.5], vec![-0.2, 0.4]).unwrap();
    let free = CircularPath {
        center: center.clone(),
        mode: 0,
        radius: 0.7,
        angular_speed: 1.0,
    };
    let constrained = CircularPath {
        center,
        mode: 1,
        radius: 0.6,
        angular_speed: 1.0,
    };
    (e, [free, constrained])
}

#[test]
fn one_form_reduction_on_both_paths() {
    let (e, paths) = two_mode_paths();
    for path in &paths {
        let r = geometric_one_form_check(path, &e, 1, 16, 1e-3).unwrap();
        assert!(r.max_residual <= 1e-6, "{}", r.max_residual);
        assert!(r.max_imaginary <= 1e-6);
        // the constrained-mode term is not identically zero
        if path.mode == 1 {
            assert!(r.samples.iter().any(|s| s.rhs.abs() > 1e-2));
        }
    }
}

#[test]
fn one_form_rejects_bad_inputs() {
    let (e, paths) = two_mode_paths();
    assert!(matches!(
        geometric_one_form_check(&paths[0], &e, 1, 4, 0.1),
        Err(Error::StepSize { .. })
    ));
    let id = Projector::identity(e.space().clone());
    assert!(matches!(
        geometric_one_form_check(&paths[0], &id, 1, 4, 1e-3),
        Err(Error::ProjectorForm { .. })
    ));
    let v = paths[0].velocity(0.0);
    assert_eq!(v.0.len(), 2);
}
