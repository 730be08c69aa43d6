//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use slocc_core::mapping::{verification_report, Provenance, PROTOCOL_INDICES};
use slocc_core::measurement::{derive_seed, ExactSource, SampledSource};
use slocc_core::{
    classify, classify_state, expectation, expectation_via_mapping, fidelity, from_canonical, named_state,
    negativity_min, protocol_expectations, random_canonical, sample_expectation, three_tangle, tomography,
    MeasurementConfig, NamedState, NoiseModel, PauliString, SloccClass, StateVector,
};

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_state(rng: &mut ChaCha8Rng) -> StateVector {
    let amps = std::array::from_fn(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)));
    StateVector::normalized(amps).expect("nonzero Gaussian vector")
}

/// Theory columns of the results table, rows in table order.
const TABLE_THEORY: [(NamedState, [f64; 4]); 7] = [
    (NamedState::Ghz, [1.00, 0.0, 0.0, 0.0]),
    (NamedState::WWbar, [1.00, 0.0, 0.0, 0.0]),
    (NamedState::W, [0.0, 0.67, 0.67, 0.67]),
    (NamedState::Bs1, [0.0, 0.0, 0.0, 1.00]),
    (NamedState::Bs2, [0.0, 0.0, 1.00, 0.0]),
    (NamedState::Bs3, [0.0, 1.00, 0.0, 0.0]),
    (NamedState::Sep, [0.0, 0.0, 0.0, 0.0]),
];

fn table_theory() -> Outcome {
    let mut worst: f64 = 0.0;
    for (state, printed) in TABLE_THEORY {
        let v = protocol_expectations(&named_state(state));
        for k in 0..4 {
            worst = worst.max((v[k] - printed[k]).abs());
        }
    }
    // The printed 0.67 is 2/3 rounded.
    let w = protocol_expectations(&named_state(NamedState::W));
    let unrounded = w[1..].iter().map(|x| (x - 2.0 / 3.0).abs()).fold(0.0, f64::max);
    outcome(
        worst <= 5e-3 && unrounded <= 1e-12,
        format!("28 entries, max deviation {worst:.2e} from printed values"),
    )
}

fn negativity_table() -> Outcome {
    let rows = [
        (NamedState::Ghz, 0.5, 0.5),
        (NamedState::WWbar, 5f64.sqrt() / 6.0, 0.37),
        (NamedState::W, 2f64.sqrt() / 3.0, 0.47),
        (NamedState::Bs1, 0.0, 0.0),
        (NamedState::Bs2, 0.0, 0.0),
        (NamedState::Bs3, 0.0, 0.0),
        (NamedState::Sep, 0.0, 0.0),
    ];
    let mut worst_printed: f64 = 0.0;
    let mut worst_exact: f64 = 0.0;
    for (state, exact, printed) in rows {
        let n = negativity_min(&named_state(state)).expect("valid state");
        worst_printed = worst_printed.max((n - printed).abs());
        worst_exact = worst_exact.max((n - exact).abs());
    }
    outcome(
        worst_printed <= 5e-3 && worst_exact <= 1e-10,
        format!("vs printed {worst_printed:.2e}, vs closed form {worst_exact:.2e}"),
    )
}

fn mapping_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let psi = random_state(&mut rng);
        for i in 1..64 {
            let direct = expectation(&psi, &PauliString::from_index(i).unwrap());
            let mapped = expectation_via_mapping(&psi, i).unwrap();
            worst = worst.max((direct - mapped).abs());
        }
    }
    let report = verification_report();
    let flagged: Vec<usize> = report.rows.iter().filter(|r| !r.published_check.is_verified()).map(|r| r.index).collect();
    let confirmed = report
        .rows
        .iter()
        .filter(|r| r.provenance == Provenance::Published && r.published_check.is_verified())
        .count();
    let diagnostics: Vec<String> = report
        .rows
        .iter()
        .filter(|r| !r.published_check.is_verified())
        .map(|r| format!("B{} {}", r.index, r.published_check.describe()))
        .collect();
    let named_operator = diagnostics.iter().all(|d| d.contains("produces +") || d.contains("produces -"));
    outcome(
        worst <= 1e-10 && flagged == [16, 31] && report.corrected == [16, 31] && confirmed == 61 && named_operator,
        format!("max deviation {worst:.2e}; {confirmed} published confirmed; flagged {}", diagnostics.join(", ")),
    )
}

fn tangle_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..10_000 {
        let p = random_canonical(seed);
        let tau = three_tangle(&from_canonical(&p).unwrap()).unwrap().tau;
        worst = worst.max((tau - p.tangle()).abs());
    }
    outcome(worst <= 1e-8, format!("10^4 canonical states, max |tau - 4 a0^2 a4^2| = {worst:.2e}"))
}

fn noisy_classification() -> Outcome {
    let expected = [
        (NamedState::Ghz, SloccClass::Ghz),
        (NamedState::WWbar, SloccClass::Ghz),
        (NamedState::W, SloccClass::W),
        (NamedState::Bs1, SloccClass::Bs1),
        (NamedState::Bs2, SloccClass::Bs2),
        (NamedState::Bs3, SloccClass::Bs3),
        (NamedState::Sep, SloccClass::Separable),
    ];
    let noise = NoiseModel::depolarizing(0.08);
    let mut lines = Vec::new();
    let mut pass = true;
    for (s, (state, class)) in expected.into_iter().enumerate() {
        let psi = named_state(state);
        let correct = (0..50u64)
            .filter(|&trial| {
                let seed = derive_seed(derive_seed(77, s as u64), trial);
                let cfg = MeasurementConfig::Sampled { shots: 10_000, seed, noise };
                classify_state(&psi, 0.15, &cfg).unwrap().label == class
            })
            .count();
        pass &= correct * 100 >= 95 * 50;
        lines.push(format!("{state} {correct}/50"));
    }
    outcome(pass, lines.join(", "))
}

fn tomography_behavior() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut exact_worst: f64 = 0.0;
    let mut states: Vec<StateVector> = NamedState::ALL.iter().map(|&s| named_state(s)).collect();
    states.extend((0..5).map(|_| random_state(&mut rng)));
    for psi in &states {
        let rho = psi.to_density();
        let rec = tomography(&ExactSource(&rho)).unwrap();
        exact_worst = exact_worst.max(rec.matrix().max_abs_diff(rho.matrix()));
    }
    let mut sampled = Vec::new();
    for state in [NamedState::Ghz, NamedState::W] {
        let rho = named_state(state).to_density();
        let src = SampledSource { rho: &rho, shots: 10_000, seed: 11, noise: NoiseModel::NONE };
        sampled.push((state, fidelity(&tomography(&src).unwrap(), &rho).unwrap()));
    }
    let pass = exact_worst <= 1e-10 && sampled.iter().all(|(_, f)| *f >= 0.99);
    let fids: Vec<String> = sampled.iter().map(|(s, f)| format!("{s} F={f:.4}")).collect();
    outcome(
        pass,
        format!("exact reconstruction error {exact_worst:.2e}; 10^4 shots/setting: {} (threshold 0.99)", fids.join(", ")),
    )
}

fn shot_noise_scaling() -> Outcome {
    let rho = named_state(NamedState::W).to_density();
    let index = PROTOCOL_INDICES[1];
    let exact = 2.0 / 3.0;
    let shots = [100u64, 1_000, 10_000];
    let mut points = Vec::new();
    let mut within = true;
    for (k, &n) in shots.iter().enumerate() {
        let means: Vec<f64> = (0..400u64)
            .map(|trial| sample_expectation(&rho, index, n, derive_seed(k as u64, trial), &NoiseModel::NONE).unwrap().mean)
            .collect();
        let rms = (means.iter().map(|m| (m - exact).powi(2)).sum::<f64>() / means.len() as f64).sqrt();
        let predicted = ((1.0 - exact * exact) / n as f64).sqrt();
        within &= (rms / predicted) <= 1.5 && (predicted / rms) <= 1.5;
        points.push(((n as f64).ln(), rms.ln()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    outcome(within && (slope + 0.5).abs() <= 0.1, format!("log-log slope {slope:.3}"))
}

fn qualitative_coverage() -> Outcome {
    let inconclusive = classify([0.0, 0.5, 0.5, 0.0], 0.15).unwrap().label == SloccClass::Inconclusive;
    let regenerated = (0..20).all(|seed| random_canonical(seed) == random_canonical(seed));
    outcome(
        inconclusive && regenerated,
        "experimental columns covered by criteria 5-6; generated rows are seed-reproducible",
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 results-table theory columns", Duration::from_secs(1), table_theory),
        ("2 negativity table theory column", Duration::from_secs(1), negativity_table),
        ("3 mapping equivalence and verifier", Duration::from_secs(10), mapping_equivalence),
        ("4 tangle closed form", Duration::from_secs(10), tangle_identity),
        ("5 classification under noise", Duration::from_secs(30), noisy_classification),
        ("6 tomography exactness and noise", Duration::from_secs(30), tomography_behavior),
        ("7 shot-noise scaling", Duration::from_secs(30), shot_noise_scaling),
        ("8 non-reproducible columns", Duration::from_secs(1), qualitative_coverage),
    ];
    let mut failures = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        failures += usize::from(!pass);
        println!(
            "{} criterion {name}: {} [{:.2}s / {}s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
