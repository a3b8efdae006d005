//! Benchmark data: Iris ingestion and the 3x3 Bars-and-Stripes generator,
//! with the threshold feature extractors that binarize them.

mod bas;
mod iris;

pub use bas::{bas_enumerate, bas_features, bas_sample, BasGrid, GridKind};
pub use iris::{iris_binary_subset, iris_features, load_iris, IrisDatum, Species, ThresholdRegime};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::discriminator::{FeatureVector, LabeledFeatureSet};

#[derive(Debug, Error, PartialEq)]
pub enum DatasetError {
    #[error("row {row}: expected {expected} comma-separated fields, found {found}")]
    WrongArity {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: field {field:?} is not a number")]
    InvalidNumber { row: usize, field: String },
    #[error("row {row}: unknown species {name:?}")]
    UnknownSpecies { row: usize, name: String },
    #[error("row {row}: measurements must be positive")]
    NonPositiveMeasurement { row: usize },
    #[error("grid cells {cells:?} do not form a single bar or stripe rectangle")]
    MalformedGrid { cells: String },
    #[error("grid cells {cells:?} are a {actual}, not a {claimed}")]
    GridKindMismatch {
        cells: String,
        claimed: String,
        actual: String,
    },
    #[error("read error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DatasetError {
    fn from(e: std::io::Error) -> Self {
        DatasetError::Io(e.to_string())
    }
}

/// Raw data points paired with 0/1 labels and a provenance note.
#[derive(Clone, Debug)]
pub struct LabeledData<T> {
    items: Vec<T>,
    labels: Vec<u8>,
    provenance: String,
}

impl<T> LabeledData<T> {
    pub fn new(items: Vec<T>, labels: Vec<u8>, provenance: impl Into<String>) -> Self {
        assert_eq!(items.len(), labels.len(), "items and labels must pair up");
        LabeledData {
            items,
            labels,
            provenance: provenance.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u8)> {
        self.items.iter().zip(self.labels.iter().copied())
    }
}

/// Binarize an Iris subset under a threshold regime (`b = 3`).
pub fn iris_feature_set(
    data: &LabeledData<IrisDatum>,
    regime: &ThresholdRegime,
) -> LabeledFeatureSet {
    let features = data
        .items()
        .iter()
        .map(|d| iris_features(d, regime))
        .collect();
    LabeledFeatureSet::new(3, features, data.labels().to_vec())
        .expect("iris features are uniformly 3 bits wide")
}

/// Binarize a Bars-and-Stripes set by reading cells row-major (`b = 9`).
pub fn bas_feature_set(data: &LabeledData<BasGrid>) -> LabeledFeatureSet {
    let features = data.items().iter().map(bas_features).collect();
    LabeledFeatureSet::new(9, features, data.labels().to_vec())
        .expect("grid features are uniformly 9 bits wide")
}

/// Outcome of scanning a feature set for patterns that carry both labels.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub distinct_patterns: usize,
    /// Patterns observed with both labels, ascending by pattern key.
    pub conflicts: Vec<FeatureVector>,
}

/// A feature set is separable iff no pattern occurs with both labels;
/// separability guarantees zero training error and zero false positives.
pub fn separability_check(data: &LabeledFeatureSet) -> SeparabilityReport {
    let mut seen: BTreeMap<u64, (FeatureVector, [bool; 2])> = BTreeMap::new();
    for (x, y) in data.iter() {
        let entry = seen
            .entry(x.pattern_key())
            .or_insert_with(|| (x.clone(), [false, false]));
        entry.1[y as usize] = true;
    }
    let conflicts: Vec<FeatureVector> = seen
        .values()
        .filter(|(_, labels)| labels[0] && labels[1])
        .map(|(x, _)| x.clone())
        .collect();
    SeparabilityReport {
        separable: conflicts.is_empty(),
        distinct_patterns: seen.len(),
        conflicts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separability_flags_conflicting_pattern() {
        let fv = |bits: &[u8]| FeatureVector::new(bits.to_vec()).unwrap();
        let data = LabeledFeatureSet::new(
            2,
            vec![fv(&[0, 0]), fv(&[0, 0]), fv(&[1, 0])],
            vec![0, 1, 1],
        )
        .unwrap();
        let report = separability_check(&data);
        assert!(!report.separable);
        assert_eq!(report.distinct_patterns, 2);
        assert_eq!(report.conflicts, vec![fv(&[0, 0])]);
    }

    #[test]
    fn separability_of_full_bas_enumeration() {
        let grids = bas_enumerate();
        let labels = grids.iter().map(|g| g.kind() as u8).collect();
        let data = LabeledData::new(grids, labels, "bas enumeration");
        let report = separability_check(&bas_feature_set(&data));
        assert!(report.separable);
        // all 22 grids are distinct as bit-strings
        assert_eq!(report.distinct_patterns, 22);
        assert!(report.conflicts.is_empty());
    }
}
