//! Minimal dense state-vector simulator for discriminator circuits.
//!
//! The register holds `b` feature qubits followed by one prediction qubit.
//! Qubit 0 is the most significant bit of the amplitude index and the
//! prediction qubit is the least significant, so the basis index of
//! `|x p>` is `2 * (tau . x) + p` and the state layout lines up with the
//! 2x2 block structure of the discriminator unitary.
//!
//! The gate set is X plus multi-controlled X with per-control polarity
//! (an open control triggers on `|0>`). Every gate is a self-inverse
//! permutation of basis states, which the verification helpers exploit:
//! amplitudes of simulated discriminator circuits are exact 0/1 values
//! and matrix comparisons can demand entrywise equality.

mod circuit;
mod gate;
mod state;
mod unitary;

pub use circuit::{run_circuit, Circuit};
pub use gate::{apply_gate, Control, GateKind, GateOp, Polarity};
pub use state::StateVector;
pub use unitary::{circuit_to_unitary, UnitaryMatrix, MAX_DENSE_QUBITS};

use thiserror::Error;

/// Absolute tolerance on `sum |a_i|^2 - 1` for a valid state vector.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Tolerance on `|a_i|^2` for recognizing a computational basis state.
pub const BASIS_TOLERANCE: f64 = 1e-9;

#[cfg(test)]
pub(crate) mod testutil {
    use num_complex::Complex64;

    use super::{Circuit, Control, GateOp, StateVector};
    use crate::rng::SplitMix64;

    pub fn random_gate(rng: &mut SplitMix64, num_qubits: usize) -> GateOp {
        let target = rng.next_below(num_qubits as u64) as usize;
        let others: Vec<usize> = (0..num_qubits).filter(|&q| q != target).collect();
        let max_controls = others.len().min(3) as u64;
        let num_controls = rng.next_below(max_controls + 1) as usize;
        match num_controls {
            0 => GateOp::x(target),
            1 if rng.next_bool(0.5) => GateOp::cx(others[0], target),
            2 if rng.next_bool(0.5) => GateOp::ccx(others[0], others[1], target),
            n => GateOp::mcx(
                others[..n]
                    .iter()
                    .map(|&q| {
                        if rng.next_bool(0.5) {
                            Control::closed(q)
                        } else {
                            Control::open(q)
                        }
                    })
                    .collect(),
                target,
            ),
        }
    }

    pub fn random_circuit(rng: &mut SplitMix64, num_qubits: usize, max_gates: usize) -> Circuit {
        let count = rng.next_below(max_gates as u64 + 1) as usize;
        let gates = (0..count).map(|_| random_gate(rng, num_qubits)).collect();
        Circuit::with_gates(num_qubits, gates).expect("generated indices are in range")
    }

    pub fn random_state(rng: &mut SplitMix64, num_qubits: usize) -> StateVector {
        let dim = 1usize << num_qubits;
        let raw: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::new(num_qubits, raw.into_iter().map(|a| a / norm).collect())
            .expect("normalized by construction")
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum QcoreError {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("register size mismatch: circuit acts on {circuit} qubits, state has {state}")]
    RegisterMismatch { circuit: usize, state: usize },
    #[error("{num_qubits} qubits exceeds the dense-matrix cap of {max} qubits")]
    DenseCapExceeded { num_qubits: usize, max: usize },
    #[error("amplitude array of length {len} does not match a {num_qubits}-qubit register")]
    BadDimension { len: usize, num_qubits: usize },
    #[error("state vector norm deviates from 1 by {error:.3e}")]
    NotNormalized { error: f64 },
    #[error("state is not a computational basis state")]
    NotBasisState,
    #[error("a register needs at least one qubit")]
    EmptyRegister,
    #[error("circuit text line {line}: {message}")]
    CircuitParse { line: usize, message: String },
}
