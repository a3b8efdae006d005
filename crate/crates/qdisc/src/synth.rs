//! Circuit synthesis for trained models, plus the 2-bit reference suite.
//!
//! Synthesis follows one uniform rule: each switched-on block index `j`
//! becomes a single multi-controlled X onto the prediction qubit whose
//! control polarities spell out the bits of `j - 1` (closed where the
//! feature bit is 1, open where it is 0). The hand-optimized two-bit
//! reference circuits are kept verbatim in [`two_bit_cases`] as
//! equivalence oracles, not as a compilation target.

use thiserror::Error;

use crate::discriminator::{Discriminator, FeatureVector, LabeledFeatureSet, ModelError};
use crate::qcore::{circuit_to_unitary, Circuit, Control, GateOp, QcoreError, UnitaryMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// Compile a model into a circuit on `b + 1` qubits: one controlled-X per
/// switched-on block, emitted in ascending block order.
///
/// All-closed control patterns of one or two controls canonicalize to `CX`
/// and `CCX`; everything else is an `MCX`.
pub fn synthesize(model: &Discriminator) -> Circuit {
    let b = model.feature_width();
    let target = b;
    let mut circuit = Circuit::new(b + 1);
    for j in model.theta_ones() {
        let key = j - 1;
        let controls: Vec<Control> = (0..b)
            .map(|i| {
                if (key >> (b - 1 - i)) & 1 == 1 {
                    Control::closed(i)
                } else {
                    Control::open(i)
                }
            })
            .collect();
        let all_closed = controls
            .iter()
            .all(|c| c.polarity == crate::qcore::Polarity::Closed);
        let gate = match (all_closed, controls.len()) {
            (true, 1) => GateOp::cx(controls[0].qubit, target),
            (true, 2) => GateOp::ccx(controls[0].qubit, controls[1].qubit, target),
            _ => GateOp::mcx(controls, target),
        };
        circuit
            .push(gate)
            .expect("synthesized indices are in range");
    }
    circuit
}

/// True iff the circuit's dense matrix equals the model's, entrywise.
///
/// A circuit on the wrong register size is simply not equivalent.
pub fn verify_model_circuit(model: &Discriminator, circuit: &Circuit) -> Result<bool, SynthError> {
    if circuit.num_qubits() != model.feature_width() + 1 {
        return Ok(false);
    }
    Ok(circuit_to_unitary(circuit)? == model.build_unitary()?)
}

/// One of the 16 labelings of the four two-bit patterns, together with the
/// hand-written reference circuit and unitary that solve it.
#[derive(Clone, Debug)]
pub struct TwoBitCase {
    pub case_id: u8,
    /// Class of each pattern, indexed by the pattern key `2*x1 + x2`.
    labels_by_key: [u8; 4],
    pub reference_circuit: Circuit,
    pub reference_unitary: UnitaryMatrix,
}

impl TwoBitCase {
    pub fn label_of(&self, bits: [u8; 2]) -> u8 {
        self.labels_by_key[(2 * bits[0] + bits[1]) as usize]
    }

    /// The four labeled points as a training set.
    pub fn labeled_points(&self) -> LabeledFeatureSet {
        let pairs = (0..4u8).map(|key| {
            let bits = vec![key >> 1, key & 1];
            (
                FeatureVector::new(bits).unwrap(),
                self.labels_by_key[key as usize],
            )
        });
        LabeledFeatureSet::from_pairs(pairs).expect("four valid two-bit points")
    }
}

// Reference data for the 16 cases. Qubits: q0 = x1, q1 = x2, p = 2.
// `X2` below means X on q1, etc.; circuits are listed gate-for-gate.
#[derive(Clone, Copy)]
enum RefGate {
    X1,
    X2,
    Xp,
    Cx1,
    Cx2,
    Ccx,
}

impl RefGate {
    fn build(self) -> GateOp {
        match self {
            RefGate::X1 => GateOp::x(0),
            RefGate::X2 => GateOp::x(1),
            RefGate::Xp => GateOp::x(2),
            RefGate::Cx1 => GateOp::cx(0, 2),
            RefGate::Cx2 => GateOp::cx(1, 2),
            RefGate::Ccx => GateOp::ccx(0, 1, 2),
        }
    }
}

struct RefCase {
    labels_by_key: [u8; 4],
    gates: &'static [RefGate],
    unitary_rows: [&'static str; 8],
}

use RefGate::{Ccx, Cx1, Cx2, Xp, X1, X2};

static REF_CASES: [RefCase; 16] = [
    // Case 1: everything class 0; bare wires.
    RefCase {
        labels_by_key: [0, 0, 0, 0],
        gates: &[],
        unitary_rows: [
            "10000000", "01000000", "00100000", "00010000", "00001000", "00000100", "00000010",
            "00000001",
        ],
    },
    // Case 2: only (0,0) is class 1.
    RefCase {
        labels_by_key: [1, 0, 0, 0],
        gates: &[Cx1, Cx2, Ccx, Xp],
        unitary_rows: [
            "01000000", "10000000", "00100000", "00010000", "00001000", "00000100", "00000010",
            "00000001",
        ],
    },
    // Case 3: only (0,1) is class 1.
    RefCase {
        labels_by_key: [0, 1, 0, 0],
        gates: &[X1, Ccx, X1],
        unitary_rows: [
            "10000000", "01000000", "00010000", "00100000", "00001000", "00000100", "00000010",
            "00000001",
        ],
    },
    // Case 4: only (1,0) is class 1.
    RefCase {
        labels_by_key: [0, 0, 1, 0],
        gates: &[X2, Ccx, X2],
        unitary_rows: [
            "10000000", "01000000", "00100000", "00010000", "00000100", "00001000", "00000010",
            "00000001",
        ],
    },
    // Case 5: only (1,1) is class 1.
    RefCase {
        labels_by_key: [0, 0, 0, 1],
        gates: &[Ccx],
        unitary_rows: [
            "10000000", "01000000", "00100000", "00010000", "00001000", "00000100", "00000001",
            "00000010",
        ],
    },
    // Case 6: class 1 iff x1 = 0.
    RefCase {
        labels_by_key: [1, 1, 0, 0],
        gates: &[Cx1, Xp],
        unitary_rows: [
            "01000000", "10000000", "00010000", "00100000", "00001000", "00000100", "00000010",
            "00000001",
        ],
    },
    // Case 7: class 1 iff x2 = 0.
    RefCase {
        labels_by_key: [1, 0, 1, 0],
        gates: &[Cx2, Xp],
        unitary_rows: [
            "01000000", "10000000", "00100000", "00010000", "00000100", "00001000", "00000010",
            "00000001",
        ],
    },
    // Case 8: class 1 iff x1 = x2.
    RefCase {
        labels_by_key: [1, 0, 0, 1],
        gates: &[Cx1, Cx2, Xp],
        unitary_rows: [
            "01000000", "10000000", "00100000", "00010000", "00001000", "00000100", "00000001",
            "00000010",
        ],
    },
    // Case 9: class 1 iff x1 != x2.
    RefCase {
        labels_by_key: [0, 1, 1, 0],
        gates: &[Cx1, Cx2],
        unitary_rows: [
            "10000000", "01000000", "00010000", "00100000", "00000100", "00001000", "00000010",
            "00000001",
        ],
    },
    // Case 10: class 1 iff x2 = 1.
    RefCase {
        labels_by_key: [0, 1, 0, 1],
        gates: &[Cx2],
        unitary_rows: [
            "10000000", "01000000", "00010000", "00100000", "00001000", "00000100", "00000001",
            "00000010",
        ],
    },
    // Case 11: class 1 iff x1 = 1.
    RefCase {
        labels_by_key: [0, 0, 1, 1],
        gates: &[Cx1],
        unitary_rows: [
            "10000000", "01000000", "00100000", "00010000", "00000100", "00001000", "00000001",
            "00000010",
        ],
    },
    // Case 12: everything but (1,1).
    RefCase {
        labels_by_key: [1, 1, 1, 0],
        gates: &[Ccx, Xp],
        unitary_rows: [
            "01000000", "10000000", "00010000", "00100000", "00000100", "00001000", "00000010",
            "00000001",
        ],
    },
    // Case 13: everything but (1,0).
    RefCase {
        labels_by_key: [1, 1, 0, 1],
        gates: &[X2, Ccx, X2, Xp],
        unitary_rows: [
            "01000000", "10000000", "00010000", "00100000", "00001000", "00000100", "00000001",
            "00000010",
        ],
    },
    // Case 14: everything but (0,1).
    RefCase {
        labels_by_key: [1, 0, 1, 1],
        gates: &[X1, Ccx, X1, Xp],
        unitary_rows: [
            "01000000", "10000000", "00100000", "00010000", "00000100", "00001000", "00000001",
            "00000010",
        ],
    },
    // Case 15: everything but (0,0).
    RefCase {
        labels_by_key: [0, 1, 1, 1],
        gates: &[Cx1, Cx2, Ccx],
        unitary_rows: [
            "10000000", "01000000", "00010000", "00100000", "00000100", "00001000", "00000001",
            "00000010",
        ],
    },
    // Case 16: everything class 1; a bare X on p.
    RefCase {
        labels_by_key: [1, 1, 1, 1],
        gates: &[Xp],
        unitary_rows: [
            "01000000", "10000000", "00010000", "00100000", "00000100", "00001000", "00000001",
            "00000010",
        ],
    },
];

/// The full hardcoded two-bit reference suite: all 16 labelings of the four
/// two-bit patterns with their reference circuits and unitaries.
pub fn two_bit_cases() -> Vec<TwoBitCase> {
    REF_CASES
        .iter()
        .enumerate()
        .map(|(index, case)| TwoBitCase {
            case_id: index as u8 + 1,
            labels_by_key: case.labels_by_key,
            reference_circuit: Circuit::with_gates(
                3,
                case.gates.iter().map(|g| g.build()).collect(),
            )
            .expect("reference gates are in range"),
            reference_unitary: UnitaryMatrix::from_binary_rows(&case.unitary_rows),
        })
        .collect()
}
