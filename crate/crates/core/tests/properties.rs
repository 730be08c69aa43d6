use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use slocc_core::entanglement::{concurrence_2q, negativity};
use slocc_core::linalg::{herm_eig, partial_trace, tensor, ComplexMatrix, Qubit};
use slocc_core::mapping::PROTOCOL_INDICES;
use slocc_core::measurement::NoiseModel;
use slocc_core::{
    expectation, expectation_via_mapping, from_canonical, negativity_min, random_canonical, sample_expectation,
    three_tangle, CanonicalParams, PauliString, StateVector,
};

fn random_state(seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = std::array::from_fn(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)));
    StateVector::normalized(amps).unwrap()
}

fn random_matrix(seed: u64, n: usize) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
}

/// Three-tangle from the Cayley hyperdeterminant of the amplitude tensor.
fn hyperdeterminant_tangle(psi: &StateVector) -> f64 {
    let a = |bits: usize| psi.amplitudes()[bits];
    let d1 = a(0b000).powi(2) * a(0b111).powi(2)
        + a(0b001).powi(2) * a(0b110).powi(2)
        + a(0b010).powi(2) * a(0b101).powi(2)
        + a(0b100).powi(2) * a(0b011).powi(2);
    let d2 = a(0b000) * a(0b111) * a(0b011) * a(0b100)
        + a(0b000) * a(0b111) * a(0b101) * a(0b010)
        + a(0b000) * a(0b111) * a(0b110) * a(0b001)
        + a(0b011) * a(0b100) * a(0b101) * a(0b010)
        + a(0b011) * a(0b100) * a(0b110) * a(0b001)
        + a(0b101) * a(0b010) * a(0b110) * a(0b001);
    let d3 = a(0b000) * a(0b110) * a(0b101) * a(0b011) + a(0b111) * a(0b001) * a(0b010) * a(0b100);
    4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
}

/// Pure-state negativity across `k | rest` from the Schmidt coefficients of
/// the single-qubit reduction.
fn schmidt_negativity(psi: &StateVector, k: Qubit) -> f64 {
    let r = partial_trace(psi.to_density().matrix(), &[k]).unwrap();
    let tr = r[(0, 0)].re + r[(1, 1)].re;
    let det = (r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let (l1, l2) = (tr / 2.0 + disc, (tr / 2.0 - disc).max(0.0));
    ((l1.sqrt() + l2.sqrt()).powi(2) - 1.0) / 2.0
}

#[test]
fn tangle_matches_hyperdeterminant() {
    for seed in 0..500 {
        let psi = random_state(seed);
        let tau = three_tangle(&psi).unwrap().tau;
        assert!((tau - hyperdeterminant_tangle(&psi)).abs() < 1e-8, "seed {seed}");
    }
}

#[test]
fn negativity_matches_schmidt_oracle() {
    for seed in 0..200 {
        let psi = random_state(1000 + seed);
        let rho = psi.to_density();
        for q in Qubit::ALL {
            let n = negativity(&rho, q).unwrap();
            assert!((n - schmidt_negativity(&psi, q)).abs() < 1e-9, "seed {seed} {q}");
        }
    }
}

#[test]
fn measures_stay_in_range() {
    for seed in 0..10_000 {
        let psi = random_state(50_000 + seed);
        let t = three_tangle(&psi).unwrap();
        assert!((0.0..=1.0 + 1e-12).contains(&t.tau), "seed {seed}: {t:?}");
        let n = negativity_min(&psi).unwrap();
        assert!((0.0..=0.5 + 1e-12).contains(&n), "seed {seed}: {n}");
    }
}

#[test]
fn canonical_tangle_agrees_with_hyperdeterminant() {
    for seed in 0..1000 {
        let p = random_canonical(seed);
        let psi = from_canonical(&p).unwrap();
        assert!((hyperdeterminant_tangle(&psi) - p.tangle()).abs() < 1e-10);
    }
}

#[test]
fn ghz_observable_tracks_canonical_tangle() {
    let xxx = PauliString::from_index(PROTOCOL_INDICES[0]).unwrap();
    for seed in 0..10_000 {
        let p = random_canonical(seed);
        let o = expectation(&from_canonical(&p).unwrap(), &xxx);
        // Only |000> and |111> are related by a full bit flip, so <xxx> = 2 a0 a4.
        assert!((o * o - p.tangle()).abs() < 1e-12, "seed {seed}");
        if o.abs() > 1e-6 {
            assert!(p.tangle() > 0.0);
        }
    }
    let bare = CanonicalParams { a0: 0.6, a1: 0.0, a2: 0.0, a3: 0.0, a4: 0.8, theta: 0.0 };
    let o = expectation(&from_canonical(&bare).unwrap(), &xxx);
    assert!((o * o - 4.0 * 0.36 * 0.64).abs() < 1e-12);
}

proptest! {
    #[test]
    fn tensor_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (a, b, c) = (random_matrix(s1, 2), random_matrix(s2, 2), random_matrix(s3, 2));
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(s1 in any::<u64>(), s2 in any::<u64>()) {
        let pure = |seed: u64, n: usize| {
            let m = random_matrix(seed, n);
            let v: Vec<Complex64> = (0..n).map(|k| m[(k, 0)]).collect();
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let v: Vec<Complex64> = v.iter().map(|z| z / norm.sqrt()).collect();
            ComplexMatrix::outer(&v, &v)
        };
        let (a, bc) = (pure(s1, 2), pure(s2, 4));
        let rho = tensor(&a, &bc).unwrap();
        prop_assert!(partial_trace(&rho, &[Qubit::ONE]).unwrap().max_abs_diff(&a) < 1e-12);
        prop_assert!(partial_trace(&rho, &[Qubit::TWO, Qubit::THREE]).unwrap().max_abs_diff(&bc) < 1e-12);
    }

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>()) {
        let m = random_matrix(seed, 8);
        let h = (&m + &m.dagger()).scale_real(0.5);
        let eig = herm_eig(&h).unwrap();
        prop_assert!((eig.values.iter().sum::<f64>() - h.trace().re).abs() < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn mapping_reads_out_every_pauli(seed in any::<u64>(), index in 1usize..64) {
        let psi = random_state(seed);
        let direct = expectation(&psi, &PauliString::from_index(index).unwrap());
        prop_assert!((expectation_via_mapping(&psi, index).unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn reduced_pair_concurrence_bounded(seed in any::<u64>()) {
        let psi = random_state(seed);
        let pair = partial_trace(psi.to_density().matrix(), &[Qubit::ONE, Qubit::TWO]).unwrap();
        let c = concurrence_2q(&pair).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn sampled_protocol_values_are_bounded_and_reproducible(seed in any::<u64>(), shots in 1u64..2000, p in 0.0f64..1.0) {
        let rho = random_state(seed).to_density();
        let noise = NoiseModel::depolarizing(p);
        for i in PROTOCOL_INDICES {
            let a = sample_expectation(&rho, i, shots, seed, &noise).unwrap();
            let b = sample_expectation(&rho, i, shots, seed, &noise).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!((-1.0..=1.0).contains(&a.mean));
            prop_assert!(a.std_error <= 1.0 / (shots as f64).sqrt() + 1e-9);
        }
    }
}
