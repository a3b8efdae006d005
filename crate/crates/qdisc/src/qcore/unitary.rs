use num_complex::Complex64;

use super::{run_circuit, Circuit, QcoreError, StateVector};

/// Dense-matrix materialization cap; beyond this, circuits and models are
/// only executed, never expanded to matrices.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Dense complex square matrix, row-major.
///
/// Every matrix produced by this crate is a permutation matrix with exact
/// 0/1 entries, so equality is plain entrywise comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = UnitaryMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from rows of `'0'`/`'1'` characters, e.g. `"01000000"`.
    ///
    /// Panics on ragged or non-binary input; intended for hardcoded fixtures.
    pub fn from_binary_rows(rows: &[&str]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            for ch in row.chars() {
                match ch {
                    '0' => entries.push(Complex64::new(0.0, 0.0)),
                    '1' => entries.push(Complex64::new(1.0, 0.0)),
                    other => panic!("invalid matrix character {other:?}"),
                }
            }
        }
        UnitaryMatrix { dim, entries }
    }

    pub(crate) fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        UnitaryMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub(crate) fn set_entry(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for r in 0..self.dim {
            for c in 0..self.dim {
                entries[c * self.dim + r] = self.entry(r, c).conj();
            }
        }
        UnitaryMatrix {
            dim: self.dim,
            entries,
        }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let dim = self.dim;
        let zero = Complex64::new(0.0, 0.0);
        let mut entries = vec![zero; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entry(i, k);
                if a == zero {
                    continue;
                }
                let row = &rhs.entries[k * dim..(k + 1) * dim];
                let out = &mut entries[i * dim..(i + 1) * dim];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        UnitaryMatrix { dim, entries }
    }

    /// Matrix-vector product on a state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector, QcoreError> {
        if state.dim() != self.dim {
            return Err(QcoreError::BadDimension {
                len: state.dim(),
                num_qubits: state.num_qubits(),
            });
        }
        let amps = state.amplitudes();
        let out: Vec<Complex64> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.entry(r, c) * amps[c]).sum())
            .collect();
        StateVector::new(state.num_qubits(), out)
    }

    /// Exact entrywise comparison with the identity.
    pub fn is_identity(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        (0..self.dim)
            .all(|r| (0..self.dim).all(|c| self.entry(r, c) == if r == c { one } else { zero }))
    }

    /// True iff entries are exactly 0/1 with a single 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut col_ones = vec![0usize; self.dim];
        for r in 0..self.dim {
            let mut row_ones = 0;
            for (c, count) in col_ones.iter_mut().enumerate() {
                let e = self.entry(r, c);
                if e == one {
                    row_ones += 1;
                    *count += 1;
                } else if e != zero {
                    return false;
                }
            }
            if row_ones != 1 {
                return false;
            }
        }
        col_ones.iter().all(|&n| n == 1)
    }
}

/// Materialize a circuit as a dense matrix: column `k` is the circuit run
/// on basis state `k`.
pub fn circuit_to_unitary(circuit: &Circuit) -> Result<UnitaryMatrix, QcoreError> {
    let num_qubits = circuit.num_qubits();
    if num_qubits > MAX_DENSE_QUBITS {
        return Err(QcoreError::DenseCapExceeded {
            num_qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << num_qubits;
    let mut matrix = UnitaryMatrix::from_entries(dim, vec![Complex64::new(0.0, 0.0); dim * dim]);
    for col in 0..dim {
        let out = run_circuit(circuit, &StateVector::from_basis_index(num_qubits, col))?;
        for (row, &amp) in out.amplitudes().iter().enumerate() {
            matrix.set_entry(row, col, amp);
        }
    }
    Ok(matrix)
}
