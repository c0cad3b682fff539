use commonbath::bath::diagonal_bath;
use commonbath::entanglement::{concurrence, partial_transpose};
use commonbath::generator::{propagate, rhs_components, rhs_equal_blocks};
use commonbath::linalg::max_abs_diff;
use commonbath::pauli::tau_via_singlet;
use commonbath::{random, DensityMatrix, PauliCoefficients};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(seed: u64) -> DensityMatrix {
    random::density_matrix(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pauli_round_trip(seed in any::<u64>()) {
        let rho = state(seed);
        let back = PauliCoefficients::from_matrix(&rho.to_pauli().to_matrix());
        prop_assert!(back.max_abs_diff(&rho.to_pauli()) < 1e-14);
    }

    #[test]
    fn tau_identity_and_range(seed in any::<u64>()) {
        let rho = state(seed);
        let tau = rho.to_pauli().tau();
        prop_assert!((tau - tau_via_singlet(rho.matrix())).abs() < 1e-13);
        prop_assert!((-3.0 - 1e-12..=1.0 + 1e-12).contains(&tau));
    }

    #[test]
    fn swap_symmetric_generator(seed in any::<u64>(), l1 in 0.0..2.0f64, l2 in 0.0..2.0f64, f in 0.0..1.0f64) {
        let block = diagonal_bath([l1, l2, 1.0], (f * l1 * l2).sqrt()).unwrap();
        let r = state(seed).to_pauli();
        let a = rhs_components(&r.swapped(), &block);
        let b = rhs_components(&r, &block).swapped();
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
        prop_assert!(max_abs_diff(&rhs_equal_blocks(&r.to_matrix(), &block), &a.swapped().to_traceless_matrix()) < 1e-12);
    }

    #[test]
    fn short_evolution_stays_physical(seed in any::<u64>(), l1 in 0.1..2.0f64, l2 in 0.1..2.0f64, f in 0.0..1.0f64) {
        let block = diagonal_bath([l1, l2, 0.5], (f * l1 * l2).sqrt()).unwrap();
        let start = state(seed).to_pauli();
        let end = DensityMatrix::from_pauli(&propagate(&start, &block, 0.5, 0.005).unwrap());
        prop_assert!(end.min_eigenvalue() > -1e-10);
        prop_assert!((end.tau() - start.tau()).abs() < 1e-12);
    }

    #[test]
    fn ppt_matches_concurrence(seed in any::<u64>()) {
        let rho = state(seed);
        let (_, min_pt) = partial_transpose(&rho);
        let c = concurrence(&rho);
        prop_assert!(!(min_pt > 1e-9 && c > 1e-9));
        prop_assert!(!(min_pt < -1e-9 && c < 1e-9));
    }
}
