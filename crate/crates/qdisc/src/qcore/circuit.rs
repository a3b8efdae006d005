use std::fmt::Write as _;

use super::gate::apply_in_place;
use super::{Control, GateOp, Polarity, QcoreError, StateVector};

/// An ordered gate list over a fixed-size register.
///
/// The register is `num_qubits - 1` feature qubits named `q0..` plus the
/// prediction qubit `p` in the last position.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        assert!(num_qubits >= 1, "a circuit needs at least one qubit");
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<GateOp>) -> Result<Self, QcoreError> {
        let mut circuit = Circuit::new(num_qubits);
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    /// Append a gate after checking its indices against the register.
    pub fn push(&mut self, gate: GateOp) -> Result<(), QcoreError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    fn qubit_name(&self, index: usize) -> String {
        if index + 1 == self.num_qubits {
            "p".to_string()
        } else {
            format!("q{index}")
        }
    }

    /// Render in the one-gate-per-line text format:
    /// `X <q>` | `CX <ctrl> <tgt>` | `CCX <c1> <c2> <tgt>` |
    /// `MCX [!]<c1> ... [!]<ck> <tgt>`, `!` marking an open control.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            match gate.kind() {
                super::GateKind::X => {
                    writeln!(out, "X {}", self.qubit_name(gate.target())).unwrap()
                }
                super::GateKind::Cx => writeln!(
                    out,
                    "CX {} {}",
                    self.qubit_name(gate.controls()[0].qubit),
                    self.qubit_name(gate.target())
                )
                .unwrap(),
                super::GateKind::Ccx => writeln!(
                    out,
                    "CCX {} {} {}",
                    self.qubit_name(gate.controls()[0].qubit),
                    self.qubit_name(gate.controls()[1].qubit),
                    self.qubit_name(gate.target())
                )
                .unwrap(),
                super::GateKind::Mcx => {
                    out.push_str("MCX");
                    for c in gate.controls() {
                        let bang = if c.polarity == Polarity::Open {
                            "!"
                        } else {
                            ""
                        };
                        write!(out, " {bang}{}", self.qubit_name(c.qubit)).unwrap();
                    }
                    writeln!(out, " {}", self.qubit_name(gate.target())).unwrap();
                }
            }
        }
        out
    }

    /// Parse the text format against a register of `num_qubits` qubits.
    ///
    /// Lines starting with `#` and blank lines are ignored.
    pub fn parse(text: &str, num_qubits: usize) -> Result<Self, QcoreError> {
        assert!(num_qubits >= 1, "a circuit needs at least one qubit");
        let mut circuit = Circuit::new(num_qubits);
        for (line_index, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let gate =
                parse_gate_line(line, num_qubits).map_err(|message| QcoreError::CircuitParse {
                    line: line_index + 1,
                    message,
                })?;
            circuit.push(gate).map_err(|e| QcoreError::CircuitParse {
                line: line_index + 1,
                message: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}

fn parse_qubit_name(token: &str, num_qubits: usize) -> Result<usize, String> {
    if token == "p" {
        return Ok(num_qubits - 1);
    }
    let digits = token
        .strip_prefix('q')
        .ok_or_else(|| format!("expected a qubit name (q<i> or p), got `{token}`"))?;
    let index: usize = digits
        .parse()
        .map_err(|_| format!("expected a qubit name (q<i> or p), got `{token}`"))?;
    if index + 1 >= num_qubits {
        return Err(format!(
            "q{index} out of range: register has feature qubits q0..q{} plus p",
            num_qubits.saturating_sub(2)
        ));
    }
    Ok(index)
}

fn parse_control_token(token: &str, num_qubits: usize) -> Result<Control, String> {
    if let Some(name) = token.strip_prefix('!') {
        Ok(Control {
            qubit: parse_qubit_name(name, num_qubits)?,
            polarity: Polarity::Open,
        })
    } else {
        Ok(Control::closed(parse_qubit_name(token, num_qubits)?))
    }
}

fn check_distinct(qubits: &[usize]) -> Result<(), String> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err("a gate may use each qubit at most once".to_string());
        }
    }
    Ok(())
}

fn parse_gate_line(line: &str, num_qubits: usize) -> Result<GateOp, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mnemonic = tokens[0];
    let args = &tokens[1..];
    let plain = |token: &&str| -> Result<usize, String> {
        if token.starts_with('!') {
            Err(format!("`!` is only valid on MCX controls, got `{token}`"))
        } else {
            parse_qubit_name(token, num_qubits)
        }
    };
    match mnemonic {
        "X" => {
            if args.len() != 1 {
                return Err(format!("X takes 1 qubit, got {}", args.len()));
            }
            Ok(GateOp::x(plain(&args[0])?))
        }
        "CX" => {
            if args.len() != 2 {
                return Err(format!("CX takes 2 qubits, got {}", args.len()));
            }
            let control = plain(&args[0])?;
            let target = plain(&args[1])?;
            check_distinct(&[control, target])?;
            Ok(GateOp::cx(control, target))
        }
        "CCX" => {
            if args.len() != 3 {
                return Err(format!("CCX takes 3 qubits, got {}", args.len()));
            }
            let c1 = plain(&args[0])?;
            let c2 = plain(&args[1])?;
            let target = plain(&args[2])?;
            check_distinct(&[c1, c2, target])?;
            Ok(GateOp::ccx(c1, c2, target))
        }
        "MCX" => {
            if args.is_empty() {
                return Err("MCX takes at least a target qubit".to_string());
            }
            let target = plain(args.last().unwrap())?;
            let controls = args[..args.len() - 1]
                .iter()
                .map(|t| parse_control_token(t, num_qubits))
                .collect::<Result<Vec<_>, _>>()?;
            let mut qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
            qubits.push(target);
            check_distinct(&qubits)?;
            Ok(GateOp::mcx(controls, target))
        }
        other => Err(format!("unknown gate `{other}`")),
    }
}

/// Apply a circuit's gates in list order; the empty circuit is the identity.
pub fn run_circuit(circuit: &Circuit, input: &StateVector) -> Result<StateVector, QcoreError> {
    if circuit.num_qubits() != input.num_qubits() {
        return Err(QcoreError::RegisterMismatch {
            circuit: circuit.num_qubits(),
            state: input.num_qubits(),
        });
    }
    let num_qubits = input.num_qubits();
    let mut amplitudes = input.clone().into_amplitudes();
    for gate in circuit.gates() {
        apply_in_place(&mut amplitudes, num_qubits, gate);
    }
    Ok(StateVector::from_permuted(num_qubits, amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_is_identity() {
        let input = StateVector::basis(&[1, 0, 0]);
        let out = run_circuit(&Circuit::new(3), &input).unwrap();
        assert_eq!(out, input);
    }

    // Reference circuit for the label-(1,1) case: a single Toffoli.
    #[test]
    fn single_toffoli_case_on_11() {
        let circuit = Circuit::with_gates(3, vec![GateOp::ccx(0, 1, 2)]).unwrap();
        let out = run_circuit(&circuit, &StateVector::basis(&[1, 1, 0])).unwrap();
        assert_eq!(out.readout().unwrap(), vec![1, 1, 1]);
    }

    // Reference circuit for the label-(1,0) case: X-conjugated Toffoli.
    #[test]
    fn conjugated_toffoli_case_on_10() {
        let circuit =
            Circuit::with_gates(3, vec![GateOp::x(1), GateOp::ccx(0, 1, 2), GateOp::x(1)]).unwrap();
        let out = run_circuit(&circuit, &StateVector::basis(&[1, 0, 0])).unwrap();
        assert_eq!(out.readout().unwrap(), vec![1, 0, 1]);
        // and it leaves the other three inputs untouched
        for bits in [[0, 0, 0], [0, 1, 0], [1, 1, 0]] {
            let out = run_circuit(&circuit, &StateVector::basis(&bits)).unwrap();
            assert_eq!(out.readout().unwrap(), vec![bits[0], bits[1], 0]);
        }
    }

    #[test]
    fn run_rejects_register_mismatch() {
        let err = run_circuit(&Circuit::new(3), &StateVector::basis(&[0, 0])).unwrap_err();
        assert_eq!(
            err,
            QcoreError::RegisterMismatch {
                circuit: 3,
                state: 2
            }
        );
    }

    #[test]
    fn norm_is_preserved_on_random_states() {
        let mut rng = crate::rng::SplitMix64::new(0xc1c1);
        for _ in 0..50 {
            let num_qubits = 2 + (rng.next_below(4) as usize);
            let state = crate::qcore::testutil::random_state(&mut rng, num_qubits);
            let circuit = crate::qcore::testutil::random_circuit(&mut rng, num_qubits, 20);
            let out = run_circuit(&circuit, &state).unwrap();
            let norm_sq: f64 = out.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm_sq - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn text_round_trip() {
        let circuit = Circuit::with_gates(
            4,
            vec![
                GateOp::x(1),
                GateOp::cx(0, 3),
                GateOp::ccx(0, 1, 3),
                GateOp::mcx(vec![Control::open(0), Control::closed(2)], 3),
            ],
        )
        .unwrap();
        let text = circuit.to_text();
        assert_eq!(text, "X q1\nCX q0 p\nCCX q0 q1 p\nMCX !q0 q2 p\n");
        assert_eq!(Circuit::parse(&text, 4).unwrap(), circuit);
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let text = "# a comment\n\n  X p\n";
        let circuit = Circuit::parse(text, 3).unwrap();
        assert_eq!(circuit.gates(), &[GateOp::x(2)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("X q0\nROTATE q1\n", 2, "unknown gate"),
            ("CX q0\n", 1, "takes 2 qubits"),
            ("CCX q0 q1 q1\n", 1, "at most once"),
            ("CX !q0 p\n", 1, "only valid on MCX"),
            ("X q9\n", 1, "out of range"),
            ("X z3\n", 1, "expected a qubit name"),
            ("MCX\n", 1, "at least a target"),
        ];
        for (text, line, fragment) in cases {
            match Circuit::parse(text, 3).unwrap_err() {
                QcoreError::CircuitParse { line: l, message } => {
                    assert_eq!(l, line, "wrong line for {text:?}");
                    assert!(
                        message.contains(fragment),
                        "{message:?} missing {fragment:?}"
                    );
                }
                other => panic!("expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn last_qubit_is_named_p_not_q() {
        // q2 on a 3-qubit register would alias p; the format rejects it.
        assert!(Circuit::parse("X q2\n", 3).is_err());
        assert!(Circuit::parse("X p\n", 3).is_ok());
    }
}
