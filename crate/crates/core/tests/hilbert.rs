use proptest::prelude::*;
use qcorr::hilbert::{hermitian_eigenvalues, kron, purify};
use qcorr::random::{random_density, random_pure};
use qcorr::{DensityMatrix, RandomSource};

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_keeps_a_state(seed in any::<u64>(), dims in dims_strategy(), rank in 1usize..=4) {
        let mut rng = RandomSource::new(seed);
        let n: usize = dims.iter().product();
        let rho = random_density(&dims, rank.min(n), &mut rng).unwrap();
        for k in 0..dims.len() {
            let red = rho.partial_trace(&[k]).unwrap();
            prop_assert!((red.matrix().trace().re - 1.0).abs() < 1e-12);
            prop_assert!(hermitian_eigenvalues(red.matrix()).iter().all(|&l| l > -1e-12));
        }
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let a = random_density(&[2], 2, &mut rng).unwrap();
        let b = random_density(&[3], 2, &mut rng).unwrap();
        let ab = DensityMatrix::new(vec![2, 3], kron(a.matrix(), b.matrix())).unwrap();
        prop_assert!(ab.partial_trace(&[0]).unwrap().max_entry_diff(&a) < 1e-13);
        prop_assert!(ab.partial_trace(&[1]).unwrap().max_entry_diff(&b) < 1e-13);
    }

    #[test]
    fn purification_round_trips(seed in any::<u64>(), dims in dims_strategy(), rank in 1usize..=5) {
        let mut rng = RandomSource::new(seed);
        let n: usize = dims.iter().product();
        let rho = random_density(&dims, rank.min(n), &mut rng).unwrap();
        let psi = purify(&rho);
        let keep: Vec<usize> = (0..dims.len()).collect();
        prop_assert_eq!(psi.dims().len(), dims.len() + 1);
        prop_assert!(psi.reduced(&keep).unwrap().max_entry_diff(&rho) < 1e-10);
    }

    #[test]
    fn permutation_is_invertible(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 3, 2], 3, &mut rng).unwrap();
        let p = rho.permute(&[2, 0, 1]).unwrap();
        prop_assert_eq!(p.dims(), &[2, 2, 3]);
        let back = p.permute(&[1, 2, 0]).unwrap();
        prop_assert!(back.max_entry_diff(&rho) < 1e-15);
        // reduced states follow the relabelling
        prop_assert!(p.partial_trace(&[1]).unwrap().max_entry_diff(&rho.partial_trace(&[0]).unwrap()) < 1e-13);
    }

    #[test]
    fn schmidt_reconstructs(seed in any::<u64>(), da in 2usize..=4, db in 2usize..=4) {
        let mut rng = RandomSource::new(seed);
        let psi = random_pure(&[da, db], &mut rng);
        let s = psi.schmidt(&[0]).unwrap();
        prop_assert!((s.reconstruct() - psi.amps()).norm() < 1e-10);
        let total: f64 = s.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(s.coefficients.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.rank() <= da.min(db));
    }
}

#[test]
fn invalid_matrices_name_their_invariant() {
    use qcorr::{CMatrix, Error, Invariant, C64};
    let mut m = CMatrix::identity(2, 2) * C64::from(0.45);
    let err = DensityMatrix::new(vec![2], m.clone()).unwrap_err();
    assert!(matches!(err, Error::InvalidState { invariant: Invariant::UnitTrace, .. }));
    m[(0, 0)] = C64::from(1.2);
    m[(1, 1)] = C64::from(-0.2);
    let err = DensityMatrix::new(vec![2], m).unwrap_err();
    assert!(matches!(err, Error::InvalidState { invariant: Invariant::PositiveSemidefinite, .. }), "{err}");
}
