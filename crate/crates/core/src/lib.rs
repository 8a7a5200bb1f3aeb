//! Collective decoherence scoring for quantum registers of spin-1/2 qubits.
//!
//! The crate runs Deutsch-Jozsa and Grover on a dense state vector and, at
//! every step, scores how exposed the register is to collective
//! (superradiant) longitudinal relaxation and collective dephasing:
//!
//! - [`basis`]: the symmetrized basis `|j, m, α⟩` built by diagonalizing
//!   `Ĵ²` inside each total-`m` sector.
//! - [`metrics`]: `P(j, m)`, the normalized T1 rate `γ/γ₀`, the normalized
//!   T2 rate `Γ/Γ₀`, and dephasing fidelity.
//! - [`coherent`]: spin coherent states and `Q(θ, φ)` maps.
//! - [`algorithms`]: the two algorithm drivers, standard and with
//!   `m = 0` starting states.
//! - [`io`]: trace, state, table and image formats.
//!
//! ```
//! use coldec::{metrics, StateVector, SymmetrizedBasis};
//!
//! let basis = SymmetrizedBasis::build(8).unwrap();
//! let plus = StateVector::basis_state(8, 0).unwrap().hadamard_all();
//! let dist = metrics::p_jm(&plus, &basis).unwrap();
//! assert!((metrics::t1_rate(&dist) - 18.0).abs() < 1e-9);
//! ```

pub mod algorithms;
pub mod basis;
pub mod coherent;
pub mod error;
pub mod half;
pub mod io;
pub mod metrics;
pub mod statevector;

pub use algorithms::{GroverConfig, OracleSpec};
pub use basis::SymmetrizedBasis;
pub use coherent::{CoherentParams, QGrid, QMesh};
pub use error::{Error, Result};
pub use half::Half;
pub use metrics::{JmDistribution, StepTrace};
pub use statevector::StateVector;
