use proptest::prelude::*;
use qcorr::channels::{dephase, local_measure, measure, measure_channel, measure_subsystem, naimark_embed, LocalMap, Povm, ProjectiveBasis};
use qcorr::entropy::{mutual_information, von_neumann};
use qcorr::hilbert::kron;
use qcorr::random::{random_density, random_unitary};
use qcorr::{CMatrix, CVector, DensityMatrix, RandomSource, C64};

fn trine() -> Povm {
    let s = (2.0f64 / 3.0).sqrt();
    let vectors: Vec<CVector> = (0..3)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            CVector::from_vec(vec![C64::from(s * (a / 2.0).cos()), C64::from(s * (a / 2.0).sin())])
        })
        .collect();
    Povm::from_vectors(&vectors).unwrap()
}

#[test]
fn naimark_dilation_reproduces_trine_statistics() {
    let povm = trine();
    let (v, basis) = naimark_embed(&povm).unwrap();
    let mut rng = RandomSource::new(3);
    for _ in 0..10 {
        let rho = random_density(&[2], 2, &mut rng).unwrap();
        let direct = povm.probabilities(&rho).unwrap();
        let lifted = DensityMatrix::new(vec![3], &v * rho.matrix() * v.adjoint()).unwrap();
        let projective = basis.to_povm().probabilities(&lifted).unwrap();
        for (a, b) in direct.iter().zip(&projective) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn trine_on_maximally_mixed_is_uniform() {
    let out = measure(&DensityMatrix::maximally_mixed(vec![2]), &trine()).unwrap();
    for p in &out.probabilities {
        assert!((p - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn measuring_one_half_of_a_bell_pair() {
    let bell = qcorr::states::phi_plus();
    let out = measure_subsystem(&bell, 1, &Povm::computational(2)).unwrap();
    // perfectly correlated classical bit pair
    let expected = DensityMatrix::from_diagonal(vec![2, 2], &[0.5, 0.0, 0.0, 0.5]).unwrap();
    assert!(out.max_entry_diff(&expected) < 1e-15);
    assert!((mutual_information(&out, &[0]).unwrap() - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dephasing_is_idempotent(seed in any::<u64>(), sub in 0usize..2) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 3], 4, &mut rng).unwrap();
        let basis = ProjectiveBasis::from_unitary(&random_unitary(rho.dims()[sub], &mut rng)).unwrap();
        let once = dephase(&rho, &basis, sub).unwrap();
        let twice = dephase(&once, &basis, sub).unwrap();
        prop_assert!(once.max_entry_diff(&twice) < 1e-13);
        prop_assert!(von_neumann(&once) >= von_neumann(&rho) - 1e-12);
    }

    #[test]
    fn measurement_channel_preserves_trace(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[3], 3, &mut rng).unwrap();
        let basis = ProjectiveBasis::from_unitary(&random_unitary(3, &mut rng)).unwrap();
        let out = measure_channel(&rho, &basis.to_povm()).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        let probs = basis.to_povm().probabilities(&rho).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_maps_commute(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 2], 3, &mut rng).unwrap();
        let pa = ProjectiveBasis::from_unitary(&random_unitary(2, &mut rng)).unwrap().to_povm();
        let pb = ProjectiveBasis::from_unitary(&random_unitary(2, &mut rng)).unwrap().to_povm();
        let both = local_measure(&rho, &[LocalMap::Measure(pa.clone()), LocalMap::Measure(pb.clone())]).unwrap();
        let swapped = measure_subsystem(&measure_subsystem(&rho, 1, &pb).unwrap(), 0, &pa).unwrap();
        prop_assert!(both.max_entry_diff(&swapped) < 1e-13);
    }

    #[test]
    fn local_dephasing_is_local(seed in any::<u64>()) {
        // dephasing B commutes with a unitary on A
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 2], 2, &mut rng).unwrap();
        let basis = ProjectiveBasis::from_unitary(&random_unitary(2, &mut rng)).unwrap();
        let u = kron(&random_unitary(2, &mut rng), &CMatrix::identity(2, 2));
        let a = dephase(&rho.conjugate_by(&u).unwrap(), &basis, 1).unwrap();
        let b = dephase(&rho, &basis, 1).unwrap().conjugate_by(&u).unwrap();
        prop_assert!(a.max_entry_diff(&b) < 1e-13);
    }
}

#[test]
fn incomplete_povm_is_rejected() {
    let half = CMatrix::identity(2, 2) * C64::from(0.5);
    let err = Povm::new(2, vec![half]).unwrap_err();
    assert!(err.to_string().contains("completeness"), "{err}");
}
