//! Collective relaxation metrics: `P(j, m)`, the normalized T1 rate
//! `γ/γ₀`, the normalized T2 rate `Γ/Γ₀`, and dephasing fidelity.
//!
//! The T1 rate assumes a cold bath, so only the downward factor
//! `(j+m)(j-m+1) = j(j+1) - m(m-1)` contributes. The T2 quantities depend on
//! the state only through its distribution over total `m`, which is
//! computed straight from the amplitudes and needs no symmetrized basis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{transition_factor, Ladder, SymmetrizedBasis};
use crate::error::{domain, Result};
use crate::half::Half;
use crate::statevector::StateVector;

/// One `(j, m)` entry of a [`JmDistribution`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JmEntry {
    pub j: Half,
    pub m: Half,
    pub p: f64,
}

/// Probabilities `P(j, m) = Σ_α |⟨j, m, α|ψ⟩|²` for one state.
#[derive(Clone, Debug, PartialEq)]
pub struct JmDistribution {
    n: usize,
    /// Descending `j`, then ascending `m`.
    entries: Vec<JmEntry>,
}

impl JmDistribution {
    /// Builds a distribution from explicit entries. Entries are sorted into
    /// canonical order; duplicate `(j, m)` pairs are rejected.
    pub fn from_entries(n: usize, mut entries: Vec<JmEntry>) -> Result<Self> {
        for e in &entries {
            if e.p < 0.0 || !e.p.is_finite() {
                return domain(format!("P({}, {}) = {} is not a probability", e.j, e.m, e.p));
            }
            if e.j.twice() > n as i32 || e.m.twice().abs() > e.j.twice() {
                return domain(format!("(j, m) = ({}, {}) invalid for {n} spins", e.j, e.m));
            }
        }
        entries.sort_by(|a, b| b.j.cmp(&a.j).then(a.m.cmp(&b.m)));
        if entries.windows(2).any(|w| w[0].j == w[1].j && w[0].m == w[1].m) {
            return domain("duplicate (j, m) entry");
        }
        Ok(Self { n, entries })
    }

    /// The point mass `P(j, m) = 1`.
    pub fn delta(n: usize, j: Half, m: Half) -> Result<Self> {
        Self::from_entries(n, vec![JmEntry { j, m, p: 1.0 }])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[JmEntry] {
        &self.entries
    }

    pub fn get(&self, j: Half, m: Half) -> f64 {
        self.entries
            .iter()
            .find(|e| e.j == j && e.m == m)
            .map_or(0.0, |e| e.p)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.p).sum()
    }

    /// Marginal weight of each `j`.
    pub fn j_weight(&self, j: Half) -> f64 {
        self.entries.iter().filter(|e| e.j == j).map(|e| e.p).sum()
    }
}

/// Projects `s` onto every `(j, m)` block of `basis`.
pub fn p_jm(s: &StateVector, basis: &SymmetrizedBasis) -> Result<JmDistribution> {
    if s.n() != basis.n() {
        return domain(format!(
            "state has {} qubits, basis has {}",
            s.n(),
            basis.n()
        ));
    }
    let entries = basis
        .block_weights(s)
        .into_iter()
        .map(|(j, m, p)| JmEntry { j, m, p })
        .collect();
    JmDistribution::from_entries(s.n(), entries)
}

/// `γ/γ₀ = Σ_{j,m} P(j, m) [j(j+1) - m(m-1)]`.
pub fn t1_rate(d: &JmDistribution) -> f64 {
    d.entries
        .iter()
        .map(|e| e.p * transition_factor(e.j, e.m, Ladder::Down).unwrap_or(0.0))
        .sum()
}

/// Probability mass per total `m`, indexed by `m + n/2` (the number of
/// up spins).
#[derive(Clone, Debug, PartialEq)]
pub struct MMarginal {
    n: usize,
    probs: Vec<f64>,
}

impl MMarginal {
    pub fn of(s: &StateVector) -> Self {
        let n = s.n();
        let mut probs = vec![0.0; n + 1];
        for (x, a) in s.amplitudes().iter().enumerate() {
            probs[x.count_ones() as usize] += a.norm_sqr();
        }
        Self { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mass at `m = ups - n/2`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, m: Half) -> f64 {
        let ups = (m.twice() + self.n as i32) / 2;
        if (m.twice() + self.n as i32) % 2 != 0 || ups < 0 {
            return 0.0;
        }
        self.probs.get(ups as usize).copied().unwrap_or(0.0)
    }

    /// `Σ_{m, m'} P_m P_{m'} w(|m - m'|)`.
    fn pair_sum(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (a, pa) in self.probs.iter().enumerate() {
            if *pa == 0.0 {
                continue;
            }
            for (b, pb) in self.probs.iter().enumerate() {
                acc += pa * pb * weight(a.abs_diff(b) as f64);
            }
        }
        acc
    }
}

/// `Γ/Γ₀ = Σ_{m, m'} P_m P_{m'} |m - m'|`.
pub fn t2_rate(s: &StateVector) -> f64 {
    MMarginal::of(s).pair_sum(|dm| dm)
}

/// Fidelity of the collectively dephased state with the original after
/// `Γ₀ t = gamma0_t`: `F = (Σ P_m P_{m'} e^{-Γ₀t|m-m'|})^{1/2}`.
pub fn dephasing_fidelity(s: &StateVector, gamma0_t: f64) -> Result<f64> {
    if gamma0_t.is_nan() || gamma0_t < 0.0 {
        return domain(format!("dephasing time must be non-negative, got {gamma0_t}"));
    }
    if gamma0_t == 0.0 {
        return Ok(1.0);
    }
    let sum = MMarginal::of(s).pair_sum(|dm| (-gamma0_t * dm).exp());
    Ok(sum.clamp(0.0, 1.0).sqrt())
}

/// Per-step collective rates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub index: usize,
    pub label: String,
    pub t1: f64,
    pub t2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pjm: Option<Vec<JmEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub n: usize,
    pub steps: Vec<Step>,
}

/// Scores every state of a run. Steps are evaluated in parallel; the output
/// order is the input order.
pub fn trace_metrics(
    states: &[(String, StateVector)],
    basis: &SymmetrizedBasis,
    keep_pjm: bool,
) -> Result<StepTrace> {
    if states.is_empty() {
        return domain("cannot score an empty run");
    }
    let n = basis.n();
    if let Some((label, s)) = states.iter().find(|(_, s)| s.n() != n) {
        return domain(format!(
            "step '{label}' has {} qubits, basis has {n}",
            s.n()
        ));
    }
    let steps = states
        .par_iter()
        .enumerate()
        .map(|(index, (label, s))| {
            let dist = p_jm(s, basis)?;
            Ok(Step {
                index,
                label: label.clone(),
                t1: t1_rate(&dist),
                t2: t2_rate(s),
                pjm: keep_pjm.then(|| dist.entries().to_vec()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StepTrace { n, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let amps = (0..1 << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector::normalized(amps).unwrap()
    }

    /// Literal double sum over computational states.
    fn t2_direct(s: &StateVector) -> f64 {
        let n = s.n();
        let mut acc = 0.0;
        for (i, a) in s.amplitudes().iter().enumerate() {
            for (k, b) in s.amplitudes().iter().enumerate() {
                let mi = i.count_ones() as f64 - n as f64 / 2.0;
                let mk = k.count_ones() as f64 - n as f64 / 2.0;
                acc += a.norm_sqr() * b.norm_sqr() * (mi - mk).abs();
            }
        }
        acc
    }

    #[test]
    fn pjm_ground_state() {
        let b = SymmetrizedBasis::build(8).unwrap();
        let d = p_jm(&StateVector::basis_state(8, 0).unwrap(), &b).unwrap();
        let four = Half::from_int(4);
        assert!((d.get(four, -four) - 1.0).abs() < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-10);
        assert_eq!(t1_rate(&d), 0.0);
    }

    #[test]
    fn pjm_uniform_superposition_is_binomial() {
        let b = SymmetrizedBasis::build(8).unwrap();
        let s = StateVector::basis_state(8, 0).unwrap().hadamard_all();
        let d = p_jm(&s, &b).unwrap();
        for e in d.entries() {
            if e.j == Half::from_int(4) {
                let k = (e.m.twice() + 8) / 2;
                assert!((e.p - binom(8, k as u64) / 256.0).abs() < 1e-12);
            } else {
                assert!(e.p.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pjm_cat_state() {
        let b = SymmetrizedBasis::build(8).unwrap();
        let h = 0.5f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 256];
        amps[0] = h.into();
        amps[255] = h.into();
        let s = StateVector::from_amplitudes(amps).unwrap();
        let d = p_jm(&s, &b).unwrap();
        let four = Half::from_int(4);
        assert!((d.get(four, four) - 0.5).abs() < 1e-12);
        assert!((d.get(four, -four) - 0.5).abs() < 1e-12);
        assert!((t2_rate(&s) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pjm_dimension_mismatch() {
        let b = SymmetrizedBasis::build(3).unwrap();
        assert!(p_jm(&StateVector::basis_state(4, 0).unwrap(), &b).is_err());
    }

    #[test]
    fn t1_rate_point_masses() {
        let four = Half::from_int(4);
        assert_eq!(t1_rate(&JmDistribution::delta(8, four, Half::ZERO).unwrap()), 20.0);
        for tj in 0..=8 {
            let d = JmDistribution::delta(8, Half(tj), Half(-tj)).unwrap();
            assert_eq!(t1_rate(&d), 0.0);
        }
    }

    #[test]
    fn t2_rate_basis_states_vanish() {
        for x in [0, 7, 100, 255] {
            assert_eq!(t2_rate(&StateVector::basis_state(8, x).unwrap()), 0.0);
        }
    }

    #[test]
    fn t2_rate_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let s = random_state(n, &mut rng);
            assert!((t2_rate(&s) - t2_direct(&s)).abs() < 1e-12);
        }
    }

    #[test]
    fn t2_rate_coherent_state_exact() {
        let s = StateVector::basis_state(8, 0).unwrap().hadamard_all();
        let oracle = t2_direct(&s);
        assert!((oracle - 102960.0 / 65536.0).abs() < 1e-12);
        assert!((t2_rate(&s) - oracle).abs() < 1e-12);
    }

    #[test]
    fn fidelity_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_state(5, &mut rng);
        assert_eq!(dephasing_fidelity(&s, 0.0).unwrap(), 1.0);
        assert!(dephasing_fidelity(&s, -1.0).is_err());
        assert!(dephasing_fidelity(&s, f64::NAN).is_err());
        let b = StateVector::basis_state(5, 9).unwrap();
        assert!((dephasing_fidelity(&b, 3.0).unwrap() - 1.0).abs() < 1e-15);

        let mut prev = 1.0;
        for i in 1..50 {
            let f = dephasing_fidelity(&s, i as f64 * 0.1).unwrap();
            assert!(f <= prev + 1e-15);
            assert!(f >= 0.0);
            prev = f;
        }
    }

    #[test]
    fn fidelity_cat_state_closed_form() {
        let h = 0.5f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 256];
        amps[0] = h.into();
        amps[255] = h.into();
        let s = StateVector::from_amplitudes(amps).unwrap();
        for x in [0.01, 0.1, 1.0] {
            let f = dephasing_fidelity(&s, x).unwrap();
            let expect = (0.5 + 0.5 * (-8.0 * x).exp()).sqrt();
            assert!((f - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_single_ground_state() {
        let b = SymmetrizedBasis::build(8).unwrap();
        let states = vec![("init".to_string(), StateVector::basis_state(8, 0).unwrap())];
        let t = trace_metrics(&states, &b, true).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].index, 0);
        assert_eq!(t.steps[0].t1, 0.0);
        assert_eq!(t.steps[0].t2, 0.0);
        assert!(t.steps[0].pjm.is_some());
        assert!(trace_metrics(&[], &b, false).is_err());
    }

    #[test]
    fn distribution_validation() {
        let e = |tj, tm, p| JmEntry { j: Half(tj), m: Half(tm), p };
        assert!(JmDistribution::from_entries(4, vec![e(2, 4, 1.0)]).is_err());
        assert!(JmDistribution::from_entries(4, vec![e(2, 0, -0.1)]).is_err());
        assert!(JmDistribution::from_entries(4, vec![e(2, 0, 0.5), e(2, 0, 0.5)]).is_err());
        let d = JmDistribution::from_entries(4, vec![e(0, 0, 0.5), e(4, 2, 0.5)]).unwrap();
        assert_eq!(d.entries()[0].j, Half(4));
        assert_eq!(d.j_weight(Half(0)), 0.5);
    }
}
