//! Dense state vectors for registers of spin-1/2 qubits.
//!
//! Amplitudes are indexed by the computational integer `x` whose binary
//! digit `x_i` is the state of qubit `i`. Logical `|0⟩` on a qubit is spin
//! down (`m_i = -1/2`) and `|1⟩` is spin up, so `|0…0⟩` is the fully
//! polarized ground state `|j = n/2, m = -n/2⟩` and the total longitudinal
//! quantum number of `|x⟩` is `popcount(x) - n/2`.

use num_complex::Complex64;

use crate::algorithms::OracleSpec;
use crate::error::{domain, format, Result};
use crate::half::Half;

/// Largest register the dense representation accepts (2^26 amplitudes).
pub const MAX_QUBITS: usize = 26;

/// Norm tolerance used when ingesting amplitudes from outside.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-6;

/// A 2x2 single-qubit unitary in the `(|0⟩, |1⟩)` basis, row major.
pub type Gate2 = [[Complex64; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return domain(format!("qubit count {n} outside 1..={MAX_QUBITS}"));
    }
    Ok(())
}

/// Total longitudinal quantum number `m` of the computational state `|x⟩`.
#[inline]
pub fn m_value(x: usize, n: usize) -> Half {
    Half(2 * x.count_ones() as i32 - n as i32)
}

impl StateVector {
    /// The computational basis state `|x⟩` on `n` qubits.
    pub fn basis_state(n: usize, x: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if x >= dim {
            return domain(format!("basis index {x} out of range for {n} qubits"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[x] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps amplitudes that are already normalized to within
    /// [`INPUT_NORM_TOLERANCE`]. The values are kept as given.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return format(format!("state norm {norm} deviates from 1"));
        }
        Ok(Self { n, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n, amps })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, x: usize) -> Complex64 {
        self.amps[x]
    }

    #[inline]
    pub fn probability(&self, x: usize) -> f64 {
        self.amps[x].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return domain(format!("qubit count mismatch: {} vs {}", self.n, other.n));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `H^{⊗n}` applied to this state.
    pub fn hadamard_all(&self) -> StateVector {
        let mut out = self.clone();
        out.apply_hadamard_all();
        out
    }

    /// In-place `H^{⊗n}` as an unnormalized Walsh-Hadamard butterfly followed
    /// by a single `2^{-n/2}` rescale.
    pub fn apply_hadamard_all(&mut self) {
        let dim = self.amps.len();
        let mut half = 1;
        while half < dim {
            for block in (0..dim).step_by(2 * half) {
                for i in block..block + half {
                    let a = self.amps[i];
                    let b = self.amps[i + half];
                    self.amps[i] = a + b;
                    self.amps[i + half] = a - b;
                }
            }
            half <<= 1;
        }
        let scale = (dim as f64).sqrt().recip();
        for a in &mut self.amps {
            *a *= scale;
        }
    }

    /// Multiplies each amplitude by `(-1)^{f(x)}`.
    pub fn phase_oracle(&self, f: &OracleSpec) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_phase_oracle(f)?;
        Ok(out)
    }

    pub fn apply_phase_oracle(&mut self, f: &OracleSpec) -> Result<()> {
        if f.table().len() != self.amps.len() {
            return format(format!(
                "truth table has {} entries, register needs {}",
                f.table().len(),
                self.amps.len()
            ));
        }
        for (a, &bit) in self.amps.iter_mut().zip(f.table()) {
            if bit {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// `(I - 2|g⟩⟨g|)` applied to this state.
    pub fn reflect_about_basis_state(&self, g: usize) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_reflection(g)?;
        Ok(out)
    }

    pub fn apply_reflection(&mut self, g: usize) -> Result<()> {
        if g >= self.amps.len() {
            return domain(format!("basis index {g} out of range for {} qubits", self.n));
        }
        self.amps[g] = -self.amps[g];
        Ok(())
    }

    /// Global phase `-1`.
    pub fn negate(&mut self) {
        for a in &mut self.amps {
            *a = -*a;
        }
    }

    /// Applies the same single-qubit unitary to every qubit.
    pub fn apply_uniform_gate(&mut self, u: &Gate2) {
        let dim = self.amps.len();
        for q in 0..self.n {
            let bit = 1usize << q;
            for lo in 0..dim {
                if lo & bit != 0 {
                    continue;
                }
                let hi = lo | bit;
                let a0 = self.amps[lo];
                let a1 = self.amps[hi];
                self.amps[lo] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[hi] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return format(format!("amplitude count {len} is not a power of two >= 2"));
    }
    let n = len.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}
