use num_complex::Complex64;

use super::{QcoreError, StateVector};

/// Trigger condition of a control qubit: closed fires on `|1>`, open on `|0>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Open,
    Closed,
}

/// A control qubit with its polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Closed,
        }
    }

    pub fn open(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Open,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    X,
    Cx,
    Ccx,
    Mcx,
}

/// One gate of the discriminator gate set: X on a target qubit, conditioned
/// on zero or more control qubits.
///
/// `Cx` and `Ccx` are the fixed-arity all-closed forms; `Mcx` takes any
/// number of controls of either polarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOp {
    kind: GateKind,
    target: usize,
    controls: Vec<Control>,
}

impl GateOp {
    pub fn x(target: usize) -> Self {
        GateOp {
            kind: GateKind::X,
            target,
            controls: Vec::new(),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        let gate = GateOp {
            kind: GateKind::Cx,
            target,
            controls: vec![Control::closed(control)],
        };
        gate.assert_well_formed();
        gate
    }

    pub fn ccx(control1: usize, control2: usize, target: usize) -> Self {
        let gate = GateOp {
            kind: GateKind::Ccx,
            target,
            controls: vec![Control::closed(control1), Control::closed(control2)],
        };
        gate.assert_well_formed();
        gate
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        let gate = GateOp {
            kind: GateKind::Mcx,
            target,
            controls,
        };
        gate.assert_well_formed();
        gate
    }

    fn assert_well_formed(&self) {
        for (i, c) in self.controls.iter().enumerate() {
            assert!(
                c.qubit != self.target,
                "control and target qubits must differ"
            );
            assert!(
                self.controls[..i].iter().all(|prev| prev.qubit != c.qubit),
                "duplicate control qubit"
            );
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// True for gates spanning more than one qubit (anything controlled).
    pub fn is_multi_qubit(&self) -> bool {
        !self.controls.is_empty()
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<(), QcoreError> {
        let check = |index: usize| {
            if index < num_qubits {
                Ok(())
            } else {
                Err(QcoreError::QubitOutOfRange { index, num_qubits })
            }
        };
        check(self.target)?;
        self.controls.iter().try_for_each(|c| check(c.qubit))
    }
}

/// Apply one gate to a state, returning the new state.
pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector, QcoreError> {
    gate.validate(state.num_qubits())?;
    let num_qubits = state.num_qubits();
    let mut amplitudes = state.amplitudes().to_vec();
    apply_in_place(&mut amplitudes, num_qubits, gate);
    Ok(StateVector::from_permuted(num_qubits, amplitudes))
}

/// Gate kernel: swap the amplitude pairs that differ in the target bit,
/// restricted to indices where every closed control reads 1 and every open
/// control reads 0. Indices must already be validated.
pub(crate) fn apply_in_place(amplitudes: &mut [Complex64], num_qubits: usize, gate: &GateOp) {
    let bit = |qubit: usize| 1usize << (num_qubits - 1 - qubit);
    let target_mask = bit(gate.target);
    let mut closed_mask = 0usize;
    let mut open_mask = 0usize;
    for c in gate.controls() {
        match c.polarity {
            Polarity::Closed => closed_mask |= bit(c.qubit),
            Polarity::Open => open_mask |= bit(c.qubit),
        }
    }
    for i in 0..amplitudes.len() {
        if i & target_mask == 0 && i & closed_mask == closed_mask && i & open_mask == 0 {
            amplitudes.swap(i, i | target_mask);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_flips_single_qubit() {
        let out = apply_gate(&StateVector::basis(&[0]), &GateOp::x(0)).unwrap();
        assert_eq!(out, StateVector::basis(&[1]));
    }

    #[test]
    fn toffoli_truth_table() {
        let ccx = GateOp::ccx(0, 1, 2);
        let out = apply_gate(&StateVector::basis(&[1, 1, 0]), &ccx).unwrap();
        assert_eq!(out.readout().unwrap(), vec![1, 1, 1]);
        // Any unset control leaves the state alone.
        for bits in [[0, 0, 0], [0, 1, 0], [1, 0, 1]] {
            let input = StateVector::basis(&bits);
            assert_eq!(apply_gate(&input, &ccx).unwrap(), input);
        }
    }

    #[test]
    fn mcx_polarity_semantics_by_enumeration() {
        // MCX(open q0, closed q1 -> q2) fires exactly on x0=0, x1=1.
        let mcx = GateOp::mcx(vec![Control::open(0), Control::closed(1)], 2);
        for index in 0..8usize {
            let bits = [
                (index >> 2) as u8 & 1,
                (index >> 1) as u8 & 1,
                index as u8 & 1,
            ];
            let out = apply_gate(&StateVector::basis(&bits), &mcx).unwrap();
            let expected_p = if bits[0] == 0 && bits[1] == 1 {
                bits[2] ^ 1
            } else {
                bits[2]
            };
            assert_eq!(out.readout().unwrap(), vec![bits[0], bits[1], expected_p]);
        }
    }

    #[test]
    fn gates_are_involutions_on_random_states() {
        let mut rng = crate::rng::SplitMix64::new(0x9a7e);
        for trial in 0..200 {
            let num_qubits = 1 + (trial % 5);
            let state = crate::qcore::testutil::random_state(&mut rng, num_qubits);
            let gate = crate::qcore::testutil::random_gate(&mut rng, num_qubits);
            let once = apply_gate(&state, &gate).unwrap();
            let twice = apply_gate(&once, &gate).unwrap();
            // Bitwise-exact: gates only move amplitudes around.
            assert_eq!(twice, state);
        }
    }

    #[test]
    fn rejects_out_of_range_indices() {
        let state = StateVector::basis(&[0, 0]);
        let err = apply_gate(&state, &GateOp::x(2)).unwrap_err();
        assert_eq!(
            err,
            QcoreError::QubitOutOfRange {
                index: 2,
                num_qubits: 2
            }
        );
        let err = apply_gate(&state, &GateOp::cx(3, 0)).unwrap_err();
        assert_eq!(
            err,
            QcoreError::QubitOutOfRange {
                index: 3,
                num_qubits: 2
            }
        );
    }

    #[test]
    #[should_panic(expected = "control and target qubits must differ")]
    fn rejects_target_in_controls() {
        GateOp::cx(1, 1);
    }
}
