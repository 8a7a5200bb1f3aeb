//! Deutsch-Jozsa and Grover drivers that emit the register state after every
//! computational step.

mod dj;
mod grover;
mod oracle;

pub use dj::{dj_is_constant, dj_run};
pub use grover::{grover_run, GroverConfig};
pub use oracle::{dnf_decompose, DnfDecomposition, Minterm, OracleKind, OracleSpec, BUILTIN_ORACLES};

use crate::statevector::StateVector;

/// A state together with the label of the step that produced it.
pub type LabeledState = (String, StateVector);
