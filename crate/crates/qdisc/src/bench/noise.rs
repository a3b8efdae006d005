use serde::Serialize;

use crate::discriminator::FeatureVector;
use crate::qcore::{apply_gate, Circuit, GateOp, StateVector};
use crate::rng::SplitMix64;

/// Synthetic noise model parameterized by two device error rates: a
/// bit-flip on the target of every multi-qubit gate and an independent
/// readout flip per qubit. Defaults match typical average CNOT and
/// readout error rates on small superconducting devices (0.015, 0.035).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseConfig {
    /// Per-qubit probability of flipping a readout bit.
    pub readout_flip_prob: f64,
    /// Per-gate probability of flipping the target after a multi-qubit gate.
    pub gate_flip_prob: f64,
    /// Shots per inference; the prediction is the majority vote.
    pub shots: u32,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            readout_flip_prob: 0.035,
            gate_flip_prob: 0.015,
            shots: 1024,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, p) in [
            ("readout", self.readout_flip_prob),
            ("gate", self.gate_flip_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{name} flip probability {p} outside [0, 1]"));
            }
        }
        if self.shots == 0 {
            return Err("shots must be at least 1".into());
        }
        Ok(())
    }
}

/// Infer a label under noise: per shot, every multi-qubit gate applies
/// correctly and then flips its target with `gate_flip_prob`; after the
/// circuit, each qubit's readout bit flips independently with
/// `readout_flip_prob`. Returns the majority vote of the prediction bit
/// over all shots, ties resolving to 1.
pub fn noisy_infer(circuit: &Circuit, x: &FeatureVector, noise: &NoiseConfig, seed: u64) -> u8 {
    assert_eq!(
        circuit.num_qubits(),
        x.width() + 1,
        "circuit register must be feature width plus the prediction qubit"
    );
    let mut input = x.bits().to_vec();
    input.push(0);
    let mut rng = SplitMix64::new(seed);
    let mut ones = 0u64;
    for _ in 0..noise.shots {
        let mut state = StateVector::basis(&input);
        for gate in circuit.gates() {
            state = apply_gate(&state, gate).expect("circuit gates fit the register");
            if gate.is_multi_qubit() && rng.next_bool(noise.gate_flip_prob) {
                state = apply_gate(&state, &GateOp::x(gate.target()))
                    .expect("target index is in range");
            }
        }
        let mut bits = state.readout().expect("basis states stay basis states");
        for bit in bits.iter_mut() {
            if rng.next_bool(noise.readout_flip_prob) {
                *bit ^= 1;
            }
        }
        ones += u64::from(*bits.last().expect("non-empty register"));
    }
    u8::from(2 * ones >= u64::from(noise.shots))
}
