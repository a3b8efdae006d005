use std::io::BufRead;

use super::{DatasetError, LabeledData};
use crate::discriminator::FeatureVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Species {
    Setosa,
    Versicolor,
    Virginica,
}

impl Species {
    fn parse(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "iris-setosa" => Some(Species::Setosa),
            "iris-versicolor" => Some(Species::Versicolor),
            "iris-virginica" => Some(Species::Virginica),
            _ => None,
        }
    }
}

/// One Iris measurement row; lengths and widths in centimeters.
#[derive(Clone, Debug, PartialEq)]
pub struct IrisDatum {
    pub sepal_length_cm: f64,
    pub sepal_width_cm: f64,
    pub petal_length_cm: f64,
    pub petal_width_cm: f64,
    pub species: Species,
}

/// Cut points for binarization. A feature bit is 1 iff the measurement is
/// strictly above its threshold; petal width is never consulted.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ThresholdRegime {
    pub sepal_length_cm: f64,
    pub sepal_width_cm: f64,
    pub petal_length_cm: f64,
}

impl Default for ThresholdRegime {
    fn default() -> Self {
        ThresholdRegime {
            sepal_length_cm: 5.50,
            sepal_width_cm: 3.00,
            petal_length_cm: 3.00,
        }
    }
}

/// Parse Iris CSV rows: four positive measurements plus a species name,
/// with an optional header line.
///
/// A first line whose leading field is not a number is treated as a header
/// and skipped; any other malformed line is an error carrying its 1-based
/// row number.
pub fn load_iris(source: impl BufRead) -> Result<Vec<IrisDatum>, DatasetError> {
    let mut data = Vec::new();
    let mut first_content_line = true;
    for (index, line) in source.lines().enumerate() {
        let row = index + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if first_content_line {
            first_content_line = false;
            let looks_like_header = fields
                .first()
                .is_some_and(|f| f.trim().parse::<f64>().is_err())
                && Species::parse(fields.last().unwrap_or(&"")).is_none();
            if looks_like_header {
                continue;
            }
        }
        if fields.len() != 5 {
            return Err(DatasetError::WrongArity {
                row,
                expected: 5,
                found: fields.len(),
            });
        }
        let number = |field: &str| -> Result<f64, DatasetError> {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| DatasetError::InvalidNumber {
                    row,
                    field: field.trim().to_string(),
                })
        };
        let datum = IrisDatum {
            sepal_length_cm: number(fields[0])?,
            sepal_width_cm: number(fields[1])?,
            petal_length_cm: number(fields[2])?,
            petal_width_cm: number(fields[3])?,
            species: Species::parse(fields[4]).ok_or_else(|| DatasetError::UnknownSpecies {
                row,
                name: fields[4].trim().to_string(),
            })?,
        };
        if [
            datum.sepal_length_cm,
            datum.sepal_width_cm,
            datum.petal_length_cm,
            datum.petal_width_cm,
        ]
        .iter()
        .any(|&m| m <= 0.0 || !m.is_finite())
        {
            return Err(DatasetError::NonPositiveMeasurement { row });
        }
        data.push(datum);
    }
    Ok(data)
}

/// Restrict to the two-class problem: Setosa (class 0) versus Virginica
/// (class 1); Versicolor rows are dropped.
pub fn iris_binary_subset(data: &[IrisDatum]) -> LabeledData<IrisDatum> {
    let mut items = Vec::new();
    let mut labels = Vec::new();
    for datum in data {
        match datum.species {
            Species::Setosa => {
                items.push(datum.clone());
                labels.push(0);
            }
            Species::Virginica => {
                items.push(datum.clone());
                labels.push(1);
            }
            Species::Versicolor => {}
        }
    }
    LabeledData::new(items, labels, "iris: Setosa = 0, Virginica = 1")
}

/// Three-bit feature vector `(a1, a2, a3)`: sepal length, sepal width, and
/// petal length, each strictly above its regime threshold.
pub fn iris_features(datum: &IrisDatum, regime: &ThresholdRegime) -> FeatureVector {
    FeatureVector::new(vec![
        (datum.sepal_length_cm > regime.sepal_length_cm) as u8,
        (datum.sepal_width_cm > regime.sepal_width_cm) as u8,
        (datum.petal_length_cm > regime.petal_length_cm) as u8,
    ])
    .expect("three binary features")
}
