mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{hermitian_spectrum_oracle, lambda_by_product, negativity_oracle, partial_transpose_oracle};
use swp_core::linalg::{c, CMatrix4, CVector4};
use swp_core::loophole::{find_loophole_state, OptimizationConfig};
use swp_core::model::spin_state;
use swp_core::quantum::{cholesky_to_state, dephase, fidelity, partial_transpose, Pauli, PauliObservable};
use swp_core::rng::trial_rng;
use swp_core::sampling::{random_angles, random_separable_state, random_state};
use swp_core::stats::{
    lambda_min, log_likelihood_ratio, outcome_probabilities, sample_counts, simulate_measurements, upper_quantile,
    SignificanceLevel,
};
use swp_core::tomography::{mle_reconstruct, mle_reconstruct_traced, reconstruction_fidelities, MleConfig, TomographySetup};
use swp_core::witness::{w0, w1, w1_closed_form, w1_observables};
use swp_core::{negativity, DensityMatrix, ScenarioParams};

fn bell() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&CVector4::new(c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0))).unwrap()
}

#[test]
fn jacobi_oracle_sanity() {
    assert!((negativity_oracle(&bell()) - 0.5).abs() < 1e-12);
    assert!(negativity_oracle(&DensityMatrix::maximally_mixed()).abs() < 1e-12);
}

#[test]
fn negativity_matches_jacobi_oracle() {
    let mut rng = trial_rng(101, 0);
    for _ in 0..2000 {
        let rho = random_state(&mut rng);
        let pt = partial_transpose(rho.matrix());
        assert!((pt - partial_transpose_oracle(rho.matrix())).camax() == 0.0);
        let (fast, slow) = (negativity(&rho), negativity_oracle(&rho));
        assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
    }
}

#[test]
fn separable_states_never_violate_witnesses() {
    let mut rng = trial_rng(202, 0);
    let (a, b) = (w0(), w1());
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let rho = random_separable_state(&mut rng, 6);
        worst = worst.min(a.expectation(&rho)).min(b.expectation(&rho));
        assert!(negativity(&rho) < 1e-9);
    }
    assert!(worst >= -1e-9, "{worst}");
}

#[test]
fn cholesky_states_are_valid() {
    let mut rng = trial_rng(303, 0);
    for _ in 0..10_000 {
        let angles = random_angles(&mut rng);
        let rho = cholesky_to_state(&angles);
        let m = rho.matrix();
        assert!((m.trace().re - 1.0).abs() < 1e-12 && m.trace().im.abs() < 1e-15);
        assert!((m - m.adjoint()).camax() < 1e-15);
        assert!(hermitian_spectrum_oracle(m)[0] > -1e-12);
        assert!((m[(0, 0)].re - angles.thetas[0].cos().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn closed_form_matches_matrix_witness() {
    let mut rng = trial_rng(404, 0);
    let w = w1();
    for _ in 0..1000 {
        let base = if rng.random::<bool>() { ScenarioParams::default() } else { ScenarioParams::close_separation() };
        let p = base.with_gamma(rng.random_range(0.0..1.0)).with_gravity(rng.random::<bool>());
        let tau = rng.random_range(0.0..20.0);
        let direct = w.expectation(&spin_state(&p, tau).unwrap());
        assert!((direct - w1_closed_form(&p, tau)).abs() < 1e-10);
    }
}

#[test]
fn likelihood_ratio_matches_product_oracle() {
    let mut rng = trial_rng(505, 0);
    let obs = w1_observables();
    for _ in 0..200 {
        let pa = outcome_probabilities(&random_state(&mut rng), &obs).unwrap();
        let p0 = outcome_probabilities(&random_state(&mut rng), &obs).unwrap();
        let data = sample_counts(&pa, 20, &mut rng);
        let fast = log_likelihood_ratio(&data, &pa, &p0).unwrap();
        let slow = lambda_by_product(&data, &pa, &p0);
        assert!((fast - slow).abs() < 1e-8 * slow.abs().max(1.0), "{fast} vs {slow}");
    }
}

#[test]
fn single_shot_quantile_matches_exact_enumeration() {
    // one ZZ measurement: λ = 2 ln(p_a,j / p_0,j) with probability p_0,j
    let zz = vec![PauliObservable::new(Pauli::Z, Pauli::Z)];
    let diag = |v: [f64; 4]| {
        DensityMatrix::new(CMatrix4::from_diagonal(&CVector4::new(c(v[0], 0.0), c(v[1], 0.0), c(v[2], 0.0), c(v[3], 0.0))))
            .unwrap()
    };
    let pa = outcome_probabilities(&diag([0.1, 0.2, 0.3, 0.4]), &zz).unwrap();
    let p0 = outcome_probabilities(&diag([0.4, 0.3, 0.25, 0.05]), &zz).unwrap();
    let mut support: Vec<(f64, f64)> =
        (0..4).map(|j| (2.0 * (pa.probs[j] / p0.probs[j]).ln(), p0.probs[j])).collect();
    support.sort_by(|a, b| a.0.total_cmp(&b.0));
    for alpha in [0.01, 0.1, 0.45] {
        let mut cdf = 0.0;
        let exact = support
            .iter()
            .find(|(_, w)| {
                cdf += w;
                cdf >= 1.0 - alpha
            })
            .unwrap()
            .0;
        let est = lambda_min(&pa, &p0, 1, SignificanceLevel::new(alpha).unwrap(), 20_000, 9).unwrap();
        assert!((est - exact).abs() < 1e-12, "alpha {alpha}: {est} vs {exact}");
    }
}

#[test]
fn nearest_rank_quantile() {
    let mut v: Vec<f64> = (1..=100).map(f64::from).collect();
    assert_eq!(upper_quantile(&mut v, 0.01), 99.0);
    assert_eq!(upper_quantile(&mut v, 0.5), 50.0);
    assert_eq!(upper_quantile(&mut [3.0], 0.01), 3.0);
}

#[test]
fn mle_likelihood_is_monotone_and_valid() {
    let setup = TomographySetup::new();
    let mut rng = trial_rng(606, 0);
    for trial in 0..40 {
        let truth = random_state(&mut rng);
        let total = if trial % 2 == 0 { 90 } else { 9000 };
        let data = simulate_measurements(&truth, setup.observables(), total / 9, trial).unwrap();
        let (est, history) = mle_reconstruct_traced(&data, &setup, &MleConfig::default()).unwrap();
        for w in history.windows(2) {
            assert!(w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0), "{} -> {}", w[0], w[1]);
        }
        assert!(hermitian_spectrum_oracle(est.matrix())[0] > -1e-10);
        assert!((est.matrix().trace().re - 1.0).abs() < 1e-10);
    }
}

#[test]
fn median_fidelity_grows_with_shots() {
    let (rho_a, _, _) = swp_core::stats::hypothesis_states(&ScenarioParams::close_separation()).unwrap();
    let median = |shots: u64| {
        let mut f = reconstruction_fidelities(&rho_a, shots, 200, 31, &MleConfig::default()).unwrap();
        f.sort_by(f64::total_cmp);
        (f[99] + f[100]) / 2.0
    };
    let m: Vec<f64> = [9u64, 90, 900, 9000].iter().map(|&s| median(s)).collect();
    assert!(m.windows(2).all(|w| w[1] >= w[0]), "{m:?}");
}

#[test]
fn unconstrained_search_recovers_mle_tomography() {
    let setup = TomographySetup::new();
    let truth = cholesky_to_state(&random_angles(&mut trial_rng(707, 0)));
    let data = simulate_measurements(&truth, setup.observables(), 200, 5).unwrap();
    let mle = mle_reconstruct(&data, &setup, &MleConfig { iterations: 2000 }).unwrap();
    let cfg = OptimizationConfig { constrained: false, restarts: 8, ..Default::default() };
    let found = find_loophole_state(&data, &DensityMatrix::maximally_mixed(), &truth, &cfg, 1).unwrap();
    let f = fidelity(&found.state, &mle).unwrap();
    assert!(f >= 0.999, "fidelity {f}");
}

#[test]
fn measurement_simulation_is_reproducible() {
    let rho = random_state(&mut trial_rng(808, 0));
    let a = simulate_measurements(&rho, &w1_observables(), 500, 42).unwrap();
    let b = simulate_measurements(&rho, &w1_observables(), 500, 42).unwrap();
    let other = simulate_measurements(&rho, &w1_observables(), 500, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.counts, other.counts);
    assert!(a.check_blocks());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dephasing_channel_consistency(gamma in 0.0f64..2.0, tau in 0.0f64..10.0, close in any::<bool>()) {
        let base = if close { ScenarioParams::close_separation() } else { ScenarioParams::default() };
        let pure = spin_state(&base, tau).unwrap();
        let direct = spin_state(&base.clone().with_gamma(gamma), tau).unwrap();
        let prob = (1.0 - (-gamma * tau).exp()) / 2.0;
        prop_assert!((direct.matrix() - dephase(&pure, prob).matrix()).camax() < 1e-9);
    }

    #[test]
    fn dephasing_never_increases_negativity(seed in any::<u64>(), p in 0.0f64..0.5) {
        let rho = random_state(&mut trial_rng(seed, 0));
        prop_assert!(negativity(&dephase(&rho, p)) <= negativity(&rho) + 1e-9);
    }

    #[test]
    fn fidelity_symmetric_and_bounded(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let (a, b) = (random_state(&mut rng), random_state(&mut rng));
        let (ab, ba) = (fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&ab));
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn negativity_bounded(seed in any::<u64>()) {
        let n = negativity(&random_state(&mut trial_rng(seed, 2)));
        prop_assert!((0.0..=0.5 + 1e-12).contains(&n));
    }
}
