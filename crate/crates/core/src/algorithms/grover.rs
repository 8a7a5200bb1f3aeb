use std::f64::consts::FRAC_PI_4;

use super::LabeledState;
use crate::error::{domain, Result};
use crate::statevector::StateVector;

/// Search for `target` by the iterant `Q = -(I - 2|start⟩⟨start|) H (I - 2|target⟩⟨target|) H`.
///
/// `start = 0` is the textbook algorithm. Any other start rotates in the
/// plane `span{|start⟩, H|target⟩}` by the same angle, since
/// `|⟨target|H|start⟩| = 2^{-n/2}` for every pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroverConfig {
    pub n: usize,
    pub target: usize,
    pub start: usize,
    pub iterations: usize,
}

impl GroverConfig {
    pub fn standard(n: usize, target: usize, iterations: usize) -> Self {
        Self { n, target, start: 0, iterations }
    }

    /// `round((π/4)·√(2^n))`.
    pub fn default_iterations(n: usize) -> usize {
        (FRAC_PI_4 * (2f64).powf(n as f64 / 2.0)).round() as usize
    }

    fn validate(&self) -> Result<()> {
        let dim = 1usize.checked_shl(self.n as u32).unwrap_or(0);
        if self.n == 0 || dim == 0 {
            return domain(format!("invalid qubit count {}", self.n));
        }
        if self.target >= dim || self.start >= dim {
            return domain(format!(
                "target {} / start {} out of range for {} qubits",
                self.target, self.start, self.n
            ));
        }
        Ok(())
    }
}

/// Emits `|start⟩`, `H|start⟩`, then for each iteration the states after
/// the target phase flip, a Hadamard layer, the start reflection (with the
/// iterant's global minus sign), and a Hadamard layer: `2 + 4l` states in
/// all. The last Hadamard of the final iteration doubles as the read-out
/// layer, so the final state concentrates on `|target⟩`.
pub fn grover_run(config: &GroverConfig) -> Result<Vec<LabeledState>> {
    config.validate()?;
    let GroverConfig { n, target, start, iterations } = *config;
    let mut out = Vec::with_capacity(2 + 4 * iterations);

    let mut s = StateVector::basis_state(n, start)?;
    out.push((format!("initial |{start}>"), s.clone()));
    s.apply_hadamard_all();
    out.push(("hadamard".to_string(), s.clone()));
    for l in 1..=iterations {
        s.apply_reflection(target)?;
        out.push((format!("iter {l} phase flip |{target}>"), s.clone()));
        s.apply_hadamard_all();
        out.push((format!("iter {l} hadamard"), s.clone()));
        s.apply_reflection(start)?;
        s.negate();
        out.push((format!("iter {l} reflect |{start}>"), s.clone()));
        s.apply_hadamard_all();
        out.push((format!("iter {l} hadamard"), s.clone()));
    }
    Ok(out)
}
