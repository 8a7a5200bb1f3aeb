use super::{dnf_decompose, LabeledState, OracleSpec};
use crate::error::{domain, Result};
use crate::statevector::StateVector;

/// Runs Deutsch-Jozsa on the control register starting from `|initial⟩`.
///
/// Emitted states: the initial state, the state after the first Hadamard
/// layer, one state per DNF block of the oracle, and the state after the
/// second Hadamard layer. A balanced oracle on eight qubits gives
/// `1 + 1 + 128 + 1 = 131` states. The work qubit stays in
/// `(|0⟩-|1⟩)/√2` throughout and is not represented; each block acts on the
/// control register as a sign flip.
pub fn dj_run(f: &OracleSpec, initial: usize) -> Result<Vec<LabeledState>> {
    let n = f.n();
    if initial >= 1usize << n {
        return domain(format!("initial state {initial} out of range for {n} qubits"));
    }
    let dnf = dnf_decompose(f);
    let mut out = Vec::with_capacity(dnf.len() + 3);

    let mut s = StateVector::basis_state(n, initial)?;
    out.push((format!("initial |{initial}>"), s.clone()));
    s.apply_hadamard_all();
    out.push(("hadamard".to_string(), s.clone()));
    let total = dnf.len();
    for (k, term) in dnf.minterms().iter().enumerate() {
        term.apply(&mut s)?;
        out.push((format!("oracle block {}/{total} x={}", k + 1, term.input()), s.clone()));
    }
    s.apply_hadamard_all();
    out.push(("hadamard final".to_string(), s));
    Ok(out)
}

/// The Deutsch-Jozsa verdict: the run returns to its initial state with
/// certainty exactly when `f` is constant.
pub fn dj_is_constant(final_state: &StateVector, initial: usize) -> bool {
    final_state.probability(initial) > 1.0 - 1e-9
}
