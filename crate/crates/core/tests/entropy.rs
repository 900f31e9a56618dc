use proptest::prelude::*;
use qcorr::entropy::{binary_entropy, conditional_entropy, coherent_information, jensen_shannon, mutual_information, relative_entropy, von_neumann};
use qcorr::hilbert::kron;
use qcorr::random::{random_density, random_pure, random_unitary};
use qcorr::{states, DensityMatrix, RandomSource};

fn local_rotation(rho: &DensityMatrix, rng: &mut RandomSource) -> DensityMatrix {
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    let u = kron(&random_unitary(da, rng), &random_unitary(db, rng));
    rho.conjugate_by(&u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_concave(seed in any::<u64>(), w in 0.0f64..=1.0) {
        let mut rng = RandomSource::new(seed);
        let a = random_density(&[3], 2, &mut rng).unwrap();
        let b = random_density(&[3], 3, &mut rng).unwrap();
        let mix = DensityMatrix::mixture(&[(w, &a), (1.0 - w, &b)]).unwrap();
        prop_assert!(von_neumann(&mix) >= w * von_neumann(&a) + (1.0 - w) * von_neumann(&b) - 1e-12);
    }

    #[test]
    fn subadditivity_and_araki_lieb(seed in any::<u64>(), rank in 1usize..=6) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 3], rank, &mut rng).unwrap();
        let sa = von_neumann(&rho.partial_trace(&[0]).unwrap());
        let sb = von_neumann(&rho.partial_trace(&[1]).unwrap());
        let s = von_neumann(&rho);
        prop_assert!(s <= sa + sb + 1e-12);
        prop_assert!(s >= (sa - sb).abs() - 1e-12);
        prop_assert!(mutual_information(&rho, &[0]).unwrap() >= -1e-12);
    }

    #[test]
    fn conditional_and_coherent_are_opposite(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 2], rank, &mut rng).unwrap();
        let c = conditional_entropy(&rho, &[0]).unwrap();
        prop_assert!((c + coherent_information(&rho, &[0]).unwrap()).abs() < 1e-12);
        prop_assert!(c >= -1.0 - 1e-12);
    }

    #[test]
    fn mutual_information_is_locally_invariant(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = RandomSource::new(seed);
        let rho = random_density(&[2, 2], rank, &mut rng).unwrap();
        let rot = local_rotation(&rho, &mut rng);
        prop_assert!((mutual_information(&rho, &[0]).unwrap() - mutual_information(&rot, &[0]).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let a = random_density(&[3], 3, &mut rng).unwrap();
        let b = random_density(&[3], 3, &mut rng).unwrap();
        prop_assert!(relative_entropy(&a, &b).unwrap() >= -1e-12);
        prop_assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-10);
    }

    #[test]
    fn jensen_shannon_is_bounded(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        let psi = random_pure(&[2, 2], &mut rng);
        let phi = random_pure(&[2, 2], &mut rng);
        let j = jensen_shannon(&psi, &phi).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&j));
        let overlap = psi.amps().dotc(phi.amps()).norm();
        // the two nonzero eigenvalues of the equal mixture are (1 +- |<psi|phi>|)/2
        prop_assert!((j - binary_entropy(0.5 * (1.0 + overlap))).abs() < 1e-10);
    }
}

#[test]
fn mutual_information_equals_relative_entropy_to_product() {
    let mut rng = RandomSource::new(11);
    for rank in 1..=4 {
        let rho = random_density(&[2, 2], rank, &mut rng).unwrap();
        let a = rho.partial_trace(&[0]).unwrap();
        let b = rho.partial_trace(&[1]).unwrap();
        let prod = DensityMatrix::new(vec![2, 2], kron(a.matrix(), b.matrix())).unwrap();
        let d = relative_entropy(&rho, &prod).unwrap();
        assert!((d - mutual_information(&rho, &[0]).unwrap()).abs() < 1e-9, "rank {rank}");
    }
}

#[test]
fn relative_entropy_is_infinite_off_support() {
    let pure = states::product_qubits(0.0, 0.0);
    let other = states::product_qubits(std::f64::consts::PI, 0.0);
    assert_eq!(relative_entropy(&pure, &other).unwrap(), f64::INFINITY);
}
