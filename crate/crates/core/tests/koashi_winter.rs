use qcorr::entropy::{binary_entropy, von_neumann};
use qcorr::koashi_winter::{conservation_law, kw_balance, kw_suite, monogamy_check, sample_seed, single_copy_surrogate, SINGLE_COPY};
use qcorr::random::random_pure;
use qcorr::{states, OptimizerConfig, RandomSource};

fn cfg(seed: u64) -> OptimizerConfig {
    OptimizerConfig::with_seed(seed)
}

#[test]
fn ghz_balance() {
    let r = kw_balance(&states::ghz3_state(), &cfg(1)).unwrap();
    assert!(r.ef_ab.abs() < 1e-12);
    assert!((r.s_a - 1.0).abs() < 1e-12);
    assert!((r.j_ae - 1.0).abs() < 1e-9);
    assert!(r.residual_kw < 1e-9);
}

#[test]
fn w_state_balance() {
    // rho_AB of the W state has concurrence 2/3
    let w = states::w3_state();
    let r = conservation_law(&w, &cfg(2)).unwrap();
    let c: f64 = 2.0 / 3.0;
    let ef = binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()));
    assert!((r.ef_ab - ef).abs() < 1e-10);
    assert!((r.s_a - binary_entropy(1.0 / 3.0)).abs() < 1e-12);
    assert!((r.j_ae - (r.s_a - ef)).abs() < 1e-6, "{r:?}");
    assert!(r.residual_conservation.unwrap() < 2e-6);
}

#[test]
fn suite_is_reproducible_and_seeded() {
    let a = kw_suite(3, 77, &cfg(0).with_restarts(8)).unwrap();
    let b = kw_suite(3, 77, &cfg(0).with_restarts(8)).unwrap();
    assert_eq!(a.summary, b.summary);
    for (i, r) in a.reports.iter().enumerate() {
        assert_eq!(r.seed, Some(sample_seed(77, i)));
        assert_eq!(r, &b.reports[i]);
    }
}

#[test]
fn surrogate_gap_equals_discord() {
    let mut rng = RandomSource::new(81);
    for i in 0..3 {
        let psi = random_pure(&[2, 2, 2], &mut rng);
        let s = single_copy_surrogate(&psi, &cfg(i)).unwrap();
        assert_eq!(s.label, SINGLE_COPY);
        assert!((s.gap - s.discord_ae).abs() < 1e-3, "{s:?}");
    }
}

#[test]
fn monogamy_on_pure_and_mixed_states() {
    let ghz = states::ghz3();
    let m = monogamy_check(&ghz, &cfg(3)).unwrap();
    assert!(m.slack.abs() < 1e-9, "{m:?}");
    let mut rng = RandomSource::new(82);
    let psi = random_pure(&[2, 2, 2, 2], &mut rng);
    let rho = psi.reduced(&[0, 1, 2]).unwrap();
    let m = monogamy_check(&rho, &cfg(4)).unwrap();
    assert!((m.s_a - von_neumann(&rho.partial_trace(&[0]).unwrap())).abs() < 1e-12);
    assert!(m.slack >= -1e-3);
    assert!(monogamy_check(&states::phi_plus(), &cfg(4)).is_err());
}
