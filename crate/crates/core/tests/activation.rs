use proptest::prelude::*;
use qcorr::activation::{
    activate, activate_from_core, build_interaction, classicality_separability_test, core_negativity, generator_unitary,
    min_activated_entanglement, zero_way_equivalence, ActivationMeasure, Verdict,
};
use qcorr::entanglement::negativity;
use qcorr::hilbert::unitarity_defect;
use qcorr::quantumness::pure_state_deficit;
use qcorr::random::{random_density, random_pure, random_unitary};
use qcorr::{states, CMatrix, Error, Invariant, OptimizerConfig, RandomSource, C64};

fn cfg(seed: u64) -> OptimizerConfig {
    OptimizerConfig::with_seed(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn activated_states_are_maximally_correlated(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 2], rank, &mut rng).unwrap();
        let (ua, ub) = (random_unitary(2, &mut rng), random_unitary(2, &mut rng));
        let us = ua.kronecker(&ub);
        let act = activate(&rho, &build_interaction([2, 2], ua, ub).unwrap()).unwrap();
        let core = &us * rho.matrix() * us.adjoint();
        prop_assert!((act.core() - &core).norm() < 1e-12);
        prop_assert!((act.negativity().unwrap().bits - core_negativity(&core)).abs() < 1e-10);
        let direct = activate_from_core([2, 2], &core).unwrap();
        prop_assert!(direct.state().max_entry_diff(act.state()) < 1e-12);
        // the system alone ends up dephased in the rotated product basis
        let sys = act.system().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { core[(i, i)] } else { C64::from(0.0) };
                prop_assert!((sys.matrix()[(i, j)] - expected).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn generators_are_unitary(params in prop::collection::vec(-4.0f64..4.0, 9)) {
        prop_assert!(unitarity_defect(&generator_unitary(3, &params)) < 1e-12);
    }
}

#[test]
fn minimum_absorbs_local_pre_rotations() {
    let mut rng = RandomSource::new(93);
    for i in 0..4 {
        let rho = random_density(&[2, 2], 2 + i % 3, &mut rng).unwrap();
        let u = random_unitary(2, &mut rng).kronecker(&random_unitary(2, &mut rng));
        let rotated = rho.conjugate_by(&u).unwrap();
        for measure in [ActivationMeasure::Negativity, ActivationMeasure::HashingEd] {
            let a = min_activated_entanglement(&rho, measure, &cfg(i as u64)).unwrap().bits;
            let b = min_activated_entanglement(&rotated, measure, &cfg(i as u64 + 10)).unwrap().bits;
            assert!((a - b).abs() <= 2e-4, "{measure:?}: {a} vs {b}");
        }
    }
}

#[test]
fn non_unitary_interaction_is_rejected() {
    let bad = CMatrix::identity(2, 2) * C64::from(1.1);
    match build_interaction([2, 2], bad, CMatrix::identity(2, 2)) {
        Err(Error::InvalidState { invariant, .. }) => assert_eq!(invariant, Invariant::Unitary),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn pure_states_activate_to_their_entanglement_entropy() {
    let mut rng = RandomSource::new(91);
    for i in 0..3 {
        let psi = random_pure(&[2, 2], &mut rng);
        let eq = zero_way_equivalence(&psi.to_density(), &cfg(i)).unwrap();
        let s = pure_state_deficit(&psi).unwrap();
        assert!((eq.zero_way_deficit - s).abs() < 1e-6, "{eq:?} vs {s}");
        assert!(eq.residual < 2e-4, "{eq:?}");
    }
}

#[test]
fn qubit_qutrit_activation() {
    let mut rng = RandomSource::new(92);
    let rho = random_density(&[2, 3], 2, &mut rng).unwrap();
    let q = min_activated_entanglement(&rho, ActivationMeasure::Negativity, &cfg(5).with_restarts(8)).unwrap();
    assert!(q.bits >= negativity(&rho, &[0]).unwrap().bits - 1e-6);
    assert_eq!(q.outcomes, 6);
}

#[test]
fn coin_verdicts() {
    let c = classicality_separability_test(&states::classical_coin(), &cfg(6)).unwrap();
    assert_eq!(c.verdict, Verdict::Classical);
    assert!(c.consistent);
    let q = classicality_separability_test(&states::quantum_coin(), &cfg(6)).unwrap();
    assert_eq!(q.verdict, Verdict::NonClassical);
    assert!(q.consistent);
    let bell = classicality_separability_test(&states::phi_plus(), &cfg(6)).unwrap();
    assert_eq!(bell.verdict, Verdict::NonClassical);
    assert!(classicality_separability_test(&random_density(&[2, 3], 2, &mut RandomSource::new(1)).unwrap(), &cfg(6)).is_err());
}
