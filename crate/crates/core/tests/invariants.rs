use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coldec::algorithms::{dj_run, grover_run, GroverConfig, OracleSpec};
use coldec::coherent::{rotate_manifold_state, CoherentParams};
use coldec::io::{read_trace_json, write_trace_json};
use coldec::metrics::{p_jm, t1_rate, t2_rate, trace_metrics};
use coldec::{Half, StateVector, SymmetrizedBasis};

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

#[test]
fn dj_t2_is_flat_for_random_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let basis = SymmetrizedBasis::build(6).unwrap();
    for _ in 0..20 {
        let f = OracleSpec::from_table(6, (0..64).map(|_| rng.gen_bool(0.5)).collect()).unwrap();
        let initial = rng.gen_range(0..64);
        let run = dj_run(&f, initial).unwrap();
        let trace = trace_metrics(&run, &basis, false).unwrap();
        let last = trace.steps.len() - 1;
        let reference = trace.steps[1].t2;
        for s in &trace.steps[1..last] {
            assert!((s.t2 - reference).abs() < 1e-12, "{}: {} vs {reference}", s.label, s.t2);
        }
    }
}

#[test]
fn probabilities_sum_to_one_along_runs() {
    let basis = SymmetrizedBasis::build(5).unwrap();
    let cfg = GroverConfig { n: 5, target: 19, start: 3, iterations: 4 };
    for (label, s) in grover_run(&cfg).unwrap() {
        let total = p_jm(&s, &basis).unwrap().total();
        assert!((total - 1.0).abs() < 1e-12, "{label}: {total}");
    }
}

#[test]
fn rotated_manifold_states_stay_in_their_j() {
    let basis = SymmetrizedBasis::build(4).unwrap();
    let p = CoherentParams::new(PI / 2.0, 0.4).unwrap();
    for j in [Half::from_int(2), Half::from_int(1), Half::ZERO] {
        for alpha in 1..=basis.degeneracies()[&j] as usize {
            let s = rotate_manifold_state(&basis, j, alpha, &p).unwrap();
            let d = p_jm(&s, &basis).unwrap();
            assert!((d.j_weight(j) - 1.0).abs() < 1e-12, "j={j} alpha={alpha}");
        }
    }
}

#[test]
fn trace_json_round_trip_on_a_real_run() {
    let basis = SymmetrizedBasis::build(6).unwrap();
    let f = OracleSpec::builtin("parity-low4", 6).unwrap();
    let trace = trace_metrics(&dj_run(&f, 15).unwrap(), &basis, true).unwrap();
    let mut buf = Vec::new();
    write_trace_json(&trace, &mut buf).unwrap();
    assert_eq!(read_trace_json(buf.as_slice()).unwrap(), trace);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_oracles_preserve_t2_and_rates_stay_bounded(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(n, &mut rng);
        let f = OracleSpec::from_table(n, (0..1 << n).map(|_| rng.gen_bool(0.5)).collect()).unwrap();
        let flipped = s.phase_oracle(&f).unwrap();
        prop_assert!((t2_rate(&s) - t2_rate(&flipped)).abs() < 1e-12);

        // γ/γ₀ ≤ max over (j, m) of (j+m)(j-m+1)
        let basis = SymmetrizedBasis::build(n).unwrap();
        let t1 = t1_rate(&p_jm(&s, &basis).unwrap());
        let j = n as f64 / 2.0;
        let bound = (j + 0.5) * (j + 1.5);
        prop_assert!((0.0..=bound + 1e-9).contains(&t1));
        prop_assert!(t2_rate(&s) <= n as f64 / 2.0 + 1e-12);
    }
}
