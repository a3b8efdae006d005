//! The discriminator model: parameters, training, and inference.
//!
//! A model over `b` features holds the set of block indices `j` (1-based,
//! `1 <= j <= 2^b`) whose parameter is switched on. Block `j` owns feature
//! pattern `x` with `j = 1 + tau . x`, `tau = [2^(b-1), ..., 2, 1]`.
//! Training inserts the block index of every class-1 training pattern and
//! never removes one, so the result is independent of input order and a
//! pattern seen with both labels lands in class 1.
//!
//! Only the switched-on indices are stored. `B = 2^b` is exponential while
//! training touches at most `N` blocks, so the sparse set keeps training at
//! `O(N log N)` time and space.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{UnitaryMatrix, MAX_DENSE_QUBITS};

/// Widest supported feature vector; block indices must fit in a `u64`.
pub const MAX_FEATURE_WIDTH: usize = 63;

/// Feature width cap for dense materialization of the model's unitary
/// (`2B = 2^(b+1)` must stay within the simulator's dense cap).
pub const MAX_DENSE_FEATURE_WIDTH: usize = MAX_DENSE_QUBITS - 1;

/// Identifier written into serialized model files.
pub const MODEL_FORMAT: &str = "qdisc-model-v1";

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("feature width must be between 1 and {MAX_FEATURE_WIDTH}, got {0}")]
    BadWidth(usize),
    #[error("feature bits must be 0 or 1")]
    BadBit,
    #[error("labels must be 0 or 1")]
    BadLabel,
    #[error("expected feature width {expected}, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("{features} feature vectors but {labels} labels")]
    LengthMismatch { features: usize, labels: usize },
    #[error("block index {index} out of range 1..={max}")]
    BlockIndexOutOfRange { index: u64, max: u64 },
    #[error("feature width {b} exceeds the dense cap of {MAX_DENSE_FEATURE_WIDTH}")]
    DenseCapExceeded { b: usize },
    #[error("prediction and label lists must be non-empty and equally long")]
    BadMetricInput,
    #[error("unsupported model format {found:?}, expected {MODEL_FORMAT:?}")]
    BadFormat { found: String },
    #[error("model file is not valid JSON: {0}")]
    Json(String),
}

/// A point on the `b`-dimensional unit hypercube.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    bits: Vec<u8>,
}

impl FeatureVector {
    pub fn new(bits: Vec<u8>) -> Result<Self, ModelError> {
        if bits.is_empty() || bits.len() > MAX_FEATURE_WIDTH {
            return Err(ModelError::BadWidth(bits.len()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(ModelError::BadBit);
        }
        Ok(FeatureVector { bits })
    }

    /// Parse a string of `0`/`1` characters, e.g. `"101"`.
    pub fn from_bitstring(s: &str) -> Result<Self, ModelError> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(ModelError::BadBit),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        FeatureVector::new(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    /// 0-based pattern key `tau . x` (the bits read as a big-endian integer).
    pub fn pattern_key(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// 1-based index of the 2x2 block owned by this pattern: `1 + tau . x`.
    /// The block occupies rows and columns `2j - 1` and `2j` (1-based).
    pub fn block_index(&self) -> u64 {
        1 + self.pattern_key()
    }
}

impl std::fmt::Display for FeatureVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Feature vectors paired with 0/1 labels, all of one fixed width.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledFeatureSet {
    width: usize,
    features: Vec<FeatureVector>,
    labels: Vec<u8>,
}

impl LabeledFeatureSet {
    pub fn new(
        width: usize,
        features: Vec<FeatureVector>,
        labels: Vec<u8>,
    ) -> Result<Self, ModelError> {
        if width == 0 || width > MAX_FEATURE_WIDTH {
            return Err(ModelError::BadWidth(width));
        }
        if features.len() != labels.len() {
            return Err(ModelError::LengthMismatch {
                features: features.len(),
                labels: labels.len(),
            });
        }
        for x in &features {
            if x.width() != width {
                return Err(ModelError::WidthMismatch {
                    expected: width,
                    found: x.width(),
                });
            }
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(ModelError::BadLabel);
        }
        Ok(LabeledFeatureSet {
            width,
            features,
            labels,
        })
    }

    /// Build from pairs, taking the width from the first vector.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (FeatureVector, u8)>,
    ) -> Result<Self, ModelError> {
        let (features, labels): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let width = features
            .first()
            .map(|x| x.width())
            .ok_or(ModelError::BadWidth(0))?;
        LabeledFeatureSet::new(width, features, labels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[FeatureVector] {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeatureVector, u8)> {
        self.features.iter().zip(self.labels.iter().copied())
    }

    /// The subset selected by `indices` (indices must be in range).
    pub fn select(&self, indices: &[usize]) -> LabeledFeatureSet {
        LabeledFeatureSet {
            width: self.width,
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// On-disk model representation.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    b: usize,
    theta_ones: Vec<u64>,
}

/// A trained discriminator: feature width `b` plus the set of switched-on
/// block indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminator {
    b: usize,
    theta: BTreeSet<u64>,
}

impl Discriminator {
    /// Build a model directly from its parameters.
    pub fn new(b: usize, theta_ones: impl IntoIterator<Item = u64>) -> Result<Self, ModelError> {
        if b == 0 || b > MAX_FEATURE_WIDTH {
            return Err(ModelError::BadWidth(b));
        }
        let max = 1u64 << b;
        let mut theta = BTreeSet::new();
        for j in theta_ones {
            if j == 0 || j > max {
                return Err(ModelError::BlockIndexOutOfRange { index: j, max });
            }
            theta.insert(j);
        }
        Ok(Discriminator { b, theta })
    }

    /// Single classical pass over the data: switch on the block of every
    /// class-1 pattern. Patterns only ever switch on, so duplicates are
    /// idempotent and conflicting labels resolve to class 1.
    pub fn train(data: &LabeledFeatureSet) -> Self {
        let mut theta = BTreeSet::new();
        for (x, y) in data.iter() {
            if y == 1 {
                theta.insert(x.block_index());
            }
        }
        Discriminator {
            b: data.width(),
            theta,
        }
    }

    pub fn feature_width(&self) -> usize {
        self.b
    }

    /// Switched-on block indices, ascending.
    pub fn theta_ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.theta.iter().copied()
    }

    pub fn theta_count(&self) -> usize {
        self.theta.len()
    }

    /// Predicted class of a feature vector: an `O(b)` index lookup.
    ///
    /// Contract: identical to applying [`Self::build_unitary`] to the basis
    /// state `|x 0>` and reading the final qubit.
    pub fn predict(&self, x: &FeatureVector) -> Result<u8, ModelError> {
        if x.width() != self.b {
            return Err(ModelError::WidthMismatch {
                expected: self.b,
                found: x.width(),
            });
        }
        Ok(self.theta.contains(&x.block_index()) as u8)
    }

    /// Materialize the model's `2B x 2B` block-diagonal unitary: block `j`
    /// is Pauli-X when switched on, identity otherwise.
    pub fn build_unitary(&self) -> Result<UnitaryMatrix, ModelError> {
        if self.b > MAX_DENSE_FEATURE_WIDTH {
            return Err(ModelError::DenseCapExceeded { b: self.b });
        }
        let dim = 1usize << (self.b + 1);
        let mut matrix = UnitaryMatrix::identity(dim);
        let zero = num_complex::Complex64::new(0.0, 0.0);
        let one = num_complex::Complex64::new(1.0, 0.0);
        for &j in &self.theta {
            let row = 2 * (j as usize - 1);
            matrix.set_entry(row, row, zero);
            matrix.set_entry(row + 1, row + 1, zero);
            matrix.set_entry(row, row + 1, one);
            matrix.set_entry(row + 1, row, one);
        }
        Ok(matrix)
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format: MODEL_FORMAT.to_string(),
            b: self.b,
            theta_ones: self.theta.iter().copied().collect(),
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        if file.format != MODEL_FORMAT {
            return Err(ModelError::BadFormat { found: file.format });
        }
        Discriminator::new(file.b, file.theta_ones)
    }
}

/// Mean absolute disagreement between two 0/1 label lists.
///
/// Equals 0 iff the lists agree everywhere and 1 iff they disagree
/// everywhere; accuracy is `1 - l1_error`.
pub fn l1_error(predicted: &[u8], actual: &[u8]) -> Result<f64, ModelError> {
    if predicted.is_empty() || predicted.len() != actual.len() {
        return Err(ModelError::BadMetricInput);
    }
    let disagreements = predicted.iter().zip(actual).filter(|(p, y)| p != y).count();
    Ok(disagreements as f64 / predicted.len() as f64)
}

/// Advisory feature width for a training set of `n` points: `ceil(log2 n)`,
/// at least 1, so that `n` is roughly `2^b`.
pub fn recommended_feature_width(n: usize) -> usize {
    assert!(n >= 1, "training set size must be positive");
    (usize::BITS - (n - 1).leading_zeros()).max(1) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::StateVector;

    fn fv(bits: &[u8]) -> FeatureVector {
        FeatureVector::new(bits.to_vec()).unwrap()
    }

    fn set(pairs: &[(&[u8], u8)]) -> LabeledFeatureSet {
        LabeledFeatureSet::from_pairs(pairs.iter().map(|&(bits, y)| (fv(bits), y))).unwrap()
    }

    #[test]
    fn block_index_examples() {
        assert_eq!(fv(&[0, 0]).block_index(), 1);
        // (1,0) owns block 3, i.e. rows/columns 5-6 of the 8x8 matrix.
        assert_eq!(fv(&[1, 0]).block_index(), 3);
        // tau = [4,2,1]; (1,0,1) . tau = 5.
        assert_eq!(fv(&[1, 0, 1]).block_index(), 6);
    }

    #[test]
    fn train_marks_class_one_patterns() {
        let data = set(&[(&[0, 0], 0), (&[0, 1], 0), (&[1, 0], 1), (&[1, 1], 0)]);
        let model = Discriminator::train(&data);
        assert_eq!(model.theta_ones().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn train_all_class_zero_gives_identity_model() {
        let data = set(&[(&[0, 1], 0), (&[1, 1], 0)]);
        let model = Discriminator::train(&data);
        assert_eq!(model.theta_count(), 0);
        assert!(model.build_unitary().unwrap().is_identity());
    }

    #[test]
    fn train_is_idempotent_under_duplicates() {
        let data = set(&[(&[1, 1], 1), (&[1, 1], 1)]);
        let model = Discriminator::train(&data);
        assert_eq!(model.theta_ones().collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn train_is_order_invariant() {
        let pairs: Vec<(&[u8], u8)> = vec![
            (&[0, 0, 1], 1),
            (&[1, 1, 0], 0),
            (&[1, 0, 1], 1),
            (&[0, 0, 0], 0),
        ];
        let forward = Discriminator::train(&set(&pairs));
        let mut reversed = pairs.clone();
        reversed.reverse();
        assert_eq!(forward, Discriminator::train(&set(&reversed)));
    }

    #[test]
    fn conflicting_labels_resolve_to_class_one() {
        let data = set(&[(&[0, 1], 0), (&[0, 1], 1), (&[0, 1], 0)]);
        let model = Discriminator::train(&data);
        assert_eq!(model.predict(&fv(&[0, 1])).unwrap(), 1);
    }

    #[test]
    fn predict_examples() {
        let model = Discriminator::new(2, [3]).unwrap();
        assert_eq!(model.predict(&fv(&[1, 0])).unwrap(), 1);
        assert_eq!(model.predict(&fv(&[0, 0])).unwrap(), 0);
        assert_eq!(model.predict(&fv(&[1, 1])).unwrap(), 0);

        let model = Discriminator::new(2, [2, 3, 4]).unwrap();
        assert_eq!(model.predict(&fv(&[0, 1])).unwrap(), 1);
        assert_eq!(model.predict(&fv(&[1, 0])).unwrap(), 1);
        assert_eq!(model.predict(&fv(&[1, 1])).unwrap(), 1);
        assert_eq!(model.predict(&fv(&[0, 0])).unwrap(), 0);
    }

    #[test]
    fn predict_rejects_width_mismatch() {
        let model = Discriminator::new(2, [3]).unwrap();
        assert_eq!(
            model.predict(&fv(&[1, 0, 1])).unwrap_err(),
            ModelError::WidthMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn unitary_of_single_block_model() {
        // b=1, both blocks on: block-diag(X, X).
        let model = Discriminator::new(1, [1, 2]).unwrap();
        let u = model.build_unitary().unwrap();
        let expected = UnitaryMatrix::from_binary_rows(&["0100", "1000", "0001", "0010"]);
        assert_eq!(u, expected);
    }

    #[test]
    fn unitary_matches_prediction_on_every_input() {
        let mut rng = crate::rng::SplitMix64::new(0xd15c);
        for b in 1..=4usize {
            for _ in 0..25 {
                let max = 1u64 << b;
                let theta: Vec<u64> = (1..=max).filter(|_| rng.next_bool(0.5)).collect();
                let model = Discriminator::new(b, theta).unwrap();
                let u = model.build_unitary().unwrap();
                for key in 0..max {
                    let bits: Vec<u8> = (0..b).map(|i| ((key >> (b - 1 - i)) & 1) as u8).collect();
                    let x = FeatureVector::new(bits.clone()).unwrap();
                    let mut input_bits = bits;
                    input_bits.push(0);
                    let output = u.apply(&StateVector::basis(&input_bits)).unwrap();
                    let measured = *output.readout().unwrap().last().unwrap();
                    assert_eq!(measured, model.predict(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn random_models_build_permutation_unitaries() {
        let mut rng = crate::rng::SplitMix64::new(0xab1e);
        for b in 1..=8usize {
            for _ in 0..8 {
                let max = 1u64 << b;
                let theta: Vec<u64> = (1..=max).filter(|_| rng.next_bool(0.5)).collect();
                let u = Discriminator::new(b, theta)
                    .unwrap()
                    .build_unitary()
                    .unwrap();
                assert!(u.is_permutation());
                assert!(u.dagger().mul(&u).is_identity());
                assert!(u.mul(&u.dagger()).is_identity());
            }
        }
    }

    #[test]
    fn perfect_fit_on_separable_data() {
        let mut rng = crate::rng::SplitMix64::new(0x5eed);
        for _ in 0..20 {
            let b = 1 + rng.next_below(6) as usize;
            // Assign each pattern a fixed label, then sample with repeats.
            let labels_by_key: Vec<u8> = (0..1u64 << b).map(|_| rng.next_bool(0.3) as u8).collect();
            let pairs: Vec<(FeatureVector, u8)> = (0..100)
                .map(|_| {
                    let key = rng.next_below(1 << b);
                    let bits: Vec<u8> = (0..b).map(|i| ((key >> (b - 1 - i)) & 1) as u8).collect();
                    (
                        FeatureVector::new(bits).unwrap(),
                        labels_by_key[key as usize],
                    )
                })
                .collect();
            let data = LabeledFeatureSet::from_pairs(pairs).unwrap();
            let model = Discriminator::train(&data);
            let predicted: Vec<u8> = data
                .features()
                .iter()
                .map(|x| model.predict(x).unwrap())
                .collect();
            assert_eq!(l1_error(&predicted, data.labels()).unwrap(), 0.0);
        }
    }

    #[test]
    fn l1_error_examples() {
        assert_eq!(l1_error(&[1, 0, 1], &[1, 0, 1]).unwrap(), 0.0);
        assert_eq!(l1_error(&[0, 1, 0], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(l1_error(&[1, 0, 1, 0], &[1, 1, 1, 1]).unwrap(), 0.5);
        assert_eq!(l1_error(&[], &[]).unwrap_err(), ModelError::BadMetricInput);
        assert_eq!(
            l1_error(&[1], &[1, 0]).unwrap_err(),
            ModelError::BadMetricInput
        );
    }

    #[test]
    fn recommended_width_examples() {
        assert_eq!(recommended_feature_width(4), 2);
        assert_eq!(recommended_feature_width(80), 7);
        assert_eq!(recommended_feature_width(1), 1);
        assert_eq!(recommended_feature_width(2), 1);
        assert_eq!(recommended_feature_width(128), 7);
        assert_eq!(recommended_feature_width(129), 8);
    }

    #[test]
    fn model_json_round_trip() {
        let model = Discriminator::new(3, [8, 2, 6, 2]).unwrap();
        let json = model.to_json();
        assert!(json.contains("\"qdisc-model-v1\""));
        let parsed = Discriminator::from_json(&json).unwrap();
        assert_eq!(parsed, model);
        // sorted + deduplicated on the wire
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["theta_ones"], serde_json::json!([2, 6, 8]));
    }

    #[test]
    fn model_json_rejects_bad_input() {
        assert!(matches!(
            Discriminator::from_json("{\"format\":\"other\",\"b\":2,\"theta_ones\":[]}"),
            Err(ModelError::BadFormat { .. })
        ));
        assert!(matches!(
            Discriminator::from_json("{\"format\":\"qdisc-model-v1\",\"b\":2,\"theta_ones\":[5]}"),
            Err(ModelError::BlockIndexOutOfRange { index: 5, max: 4 })
        ));
        assert!(matches!(
            Discriminator::from_json("not json"),
            Err(ModelError::Json(_))
        ));
    }

    #[test]
    fn dense_cap_is_enforced() {
        let model = Discriminator::new(12, []).unwrap();
        assert_eq!(
            model.build_unitary().unwrap_err(),
            ModelError::DenseCapExceeded { b: 12 }
        );
    }

    #[test]
    fn unitary_at_the_dense_cap_boundary() {
        // b = 11 is the widest materializable model (4096x4096). The full
        // dense product is too slow here; permutation structure implies
        // unitarity for this matrix family.
        let mut rng = crate::rng::SplitMix64::new(0xcab);
        let theta: Vec<u64> = (1..=1u64 << 11).filter(|_| rng.next_bool(0.5)).collect();
        let u = Discriminator::new(11, theta)
            .unwrap()
            .build_unitary()
            .unwrap();
        assert_eq!(u.dim(), 4096);
        assert!(u.is_permutation());
    }

    #[test]
    fn feature_set_validation() {
        assert!(matches!(
            LabeledFeatureSet::new(2, vec![fv(&[1, 0, 1])], vec![0]),
            Err(ModelError::WidthMismatch {
                expected: 2,
                found: 3
            })
        ));
        assert!(matches!(
            LabeledFeatureSet::new(2, vec![fv(&[1, 0])], vec![0, 1]),
            Err(ModelError::LengthMismatch { .. })
        ));
        assert!(matches!(
            LabeledFeatureSet::new(2, vec![fv(&[1, 0])], vec![2]),
            Err(ModelError::BadLabel)
        ));
    }
}
