use num_complex::Complex64;

use super::{QcoreError, BASIS_TOLERANCE, NORM_TOLERANCE};

/// Normalized complex amplitude vector over all basis states of a register.
///
/// Qubit 0 maps to the most significant bit of the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Build a state from raw amplitudes, checking dimension and norm.
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self, QcoreError> {
        if num_qubits == 0 {
            return Err(QcoreError::EmptyRegister);
        }
        let dim = 1usize
            .checked_shl(num_qubits as u32)
            .ok_or(QcoreError::BadDimension {
                len: amplitudes.len(),
                num_qubits,
            })?;
        if amplitudes.len() != dim {
            return Err(QcoreError::BadDimension {
                len: amplitudes.len(),
                num_qubits,
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let error = (norm_sq - 1.0).abs();
        if error > NORM_TOLERANCE {
            return Err(QcoreError::NotNormalized { error });
        }
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// The computational basis state `|bits>`, with `bits[0]` the most
    /// significant bit of the basis index.
    pub fn basis(bits: &[u8]) -> Self {
        assert!(!bits.is_empty(), "basis state needs at least one qubit");
        assert!(bits.len() < 32, "register too large to materialize");
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::from_basis_index(bits.len(), index)
    }

    /// The basis state with amplitude 1 at `index`.
    pub fn from_basis_index(num_qubits: usize, index: usize) -> Self {
        assert!((1..32).contains(&num_qubits));
        let dim = 1usize << num_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Rebuild a state from amplitudes known to be a permutation of a valid
    /// state's amplitudes, skipping the norm check.
    pub(crate) fn from_permuted(num_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << num_qubits);
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    /// Deterministic measurement of a computational basis state.
    ///
    /// Returns the unique bit-string when a single basis amplitude carries
    /// (within [`BASIS_TOLERANCE`]) all the probability mass; any other
    /// state signals misuse of the noiseless path.
    pub fn readout(&self) -> Result<Vec<u8>, QcoreError> {
        let (index, weight) = self
            .amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("state vector is never empty");
        if weight < 1.0 - BASIS_TOLERANCE {
            return Err(QcoreError::NotBasisState);
        }
        Ok((0..self.num_qubits)
            .map(|q| ((index >> (self.num_qubits - 1 - q)) & 1) as u8)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_single_qubit_zero() {
        let s = StateVector::basis(&[0]);
        assert_eq!(s.amplitudes(), &[amp(1.0), amp(0.0)]);
    }

    #[test]
    fn basis_is_big_endian() {
        // |10> puts the amplitude at index 2 of 4.
        let s = StateVector::basis(&[1, 0]);
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitudes()[2], amp(1.0));
        assert_eq!(
            s.amplitudes().iter().filter(|a| a.norm_sqr() > 0.0).count(),
            1
        );

        // binary 101 = 5
        let s = StateVector::basis(&[1, 0, 1]);
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amplitudes()[5], amp(1.0));
    }

    #[test]
    fn new_rejects_wrong_dimension() {
        let err = StateVector::new(2, vec![amp(1.0); 3]).unwrap_err();
        assert_eq!(
            err,
            QcoreError::BadDimension {
                len: 3,
                num_qubits: 2
            }
        );
    }

    #[test]
    fn new_rejects_unnormalized() {
        let err = StateVector::new(1, vec![amp(1.0), amp(1.0)]).unwrap_err();
        assert!(matches!(err, QcoreError::NotNormalized { .. }));
    }

    #[test]
    fn new_rejects_empty_register() {
        assert_eq!(
            StateVector::new(0, vec![amp(1.0)]).unwrap_err(),
            QcoreError::EmptyRegister
        );
    }

    #[test]
    fn readout_round_trips_basis_states() {
        assert_eq!(
            StateVector::basis(&[0, 1, 1]).readout().unwrap(),
            vec![0, 1, 1]
        );
        assert_eq!(
            StateVector::basis(&[1, 1, 0]).readout().unwrap(),
            vec![1, 1, 0]
        );
    }

    #[test]
    fn readout_rejects_superpositions() {
        let r = 0.5f64.sqrt();
        let s = StateVector::new(1, vec![amp(r), amp(r)]).unwrap();
        assert_eq!(s.readout().unwrap_err(), QcoreError::NotBasisState);
    }
}
