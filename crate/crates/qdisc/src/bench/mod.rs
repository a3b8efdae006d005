//! Monte-Carlo benchmark harness.
//!
//! Each trial partitions the feature set at random into a training subset
//! of size `N` and a validation remainder, trains a model, synthesizes its
//! circuit, and infers every validation point by simulating that circuit on
//! `|x 0>` (optionally through the noise model). Per-trial seeds come from
//! a counter-based derivation off the master seed, so trials are
//! independent streams and the emitted bytes depend only on
//! `(config, master_seed)` regardless of thread count or execution order.

mod noise;
mod stats;

pub use noise::{noisy_infer, NoiseConfig};
pub use stats::{ExperimentStats, MetricSummary, HISTOGRAM_BINS, HISTOGRAM_BIN_WIDTH};

use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::datasets::{bas_feature_set, bas_sample, iris_feature_set, ThresholdRegime};
use crate::discriminator::{l1_error, Discriminator, LabeledFeatureSet, ModelError};
use crate::qcore::{run_circuit, QcoreError, StateVector};
use crate::rng::{derive_stream, SplitMix64};
use crate::synth::synthesize;

/// Stream index reserved for generating the Bars-and-Stripes dataset
/// itself; trial streams use indices starting at 0.
const BAS_DATASET_STREAM: u64 = u64::MAX;

/// Size of the generated Bars-and-Stripes dataset.
pub const BAS_DATASET_SIZE: usize = 100;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error("no trials to report")]
    EmptyTrials,
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Iris,
    Bas,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetKind,
    pub train_size: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub noise: Option<NoiseConfig>,
    /// Iris threshold regime; ignored for Bars-and-Stripes.
    pub regime: Option<ThresholdRegime>,
}

impl ExperimentConfig {
    pub fn validate(&self, dataset_size: usize) -> Result<(), BenchError> {
        if self.train_size == 0 || self.train_size >= dataset_size {
            return Err(BenchError::InvalidConfig(format!(
                "train size must be in 1..{dataset_size}, got {} (validation set may not be empty)",
                self.train_size
            )));
        }
        if self.trials == 0 {
            return Err(BenchError::InvalidConfig(
                "at least one trial is required".into(),
            ));
        }
        if let Some(noise) = &self.noise {
            noise.validate().map_err(BenchError::InvalidConfig)?;
        }
        Ok(())
    }
}

/// Outcome of a single train/validate trial.
#[derive(Clone, Debug)]
pub struct TrialResult {
    pub trial_index: usize,
    /// Predicted labels for the validation points, in dataset order.
    pub predictions: Vec<u8>,
    pub accuracy: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub false_positive_rate: f64,
    pub false_negative_rate: f64,
}

/// Build the feature set an experiment runs on.
///
/// Iris needs externally loaded data; Bars-and-Stripes is generated from a
/// dedicated stream of the master seed.
pub fn prepare_feature_set(
    config: &ExperimentConfig,
    iris_data: Option<&crate::datasets::LabeledData<crate::datasets::IrisDatum>>,
) -> Result<LabeledFeatureSet, BenchError> {
    match config.dataset {
        DatasetKind::Iris => {
            let data = iris_data.ok_or_else(|| {
                BenchError::InvalidConfig("the iris dataset requires a loaded CSV".into())
            })?;
            let regime = config.regime.unwrap_or_default();
            Ok(iris_feature_set(data, &regime))
        }
        DatasetKind::Bas => {
            let seed = derive_stream(config.master_seed, BAS_DATASET_STREAM);
            Ok(bas_feature_set(&bas_sample(BAS_DATASET_SIZE, seed)))
        }
    }
}

/// Uniform random partition into `n` training indices and the ascending
/// remainder for validation (partial Fisher-Yates).
fn partition(rng: &mut SplitMix64, size: usize, n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut indices: Vec<usize> = (0..size).collect();
    for i in 0..n {
        let j = i + rng.next_below((size - i) as u64) as usize;
        indices.swap(i, j);
    }
    let mut train = indices[..n].to_vec();
    let mut validation = indices[n..].to_vec();
    train.sort_unstable();
    validation.sort_unstable();
    (train, validation)
}

/// Run one trial: partition, train, synthesize, and infer every validation
/// point through the simulated circuit. Fully determined by
/// `(config, trial_seed)`.
pub fn run_trial(
    data: &LabeledFeatureSet,
    config: &ExperimentConfig,
    trial_index: usize,
    trial_seed: u64,
) -> Result<TrialResult, BenchError> {
    if config.train_size >= data.len() {
        return Err(BenchError::InvalidConfig(format!(
            "train size {} leaves no validation points in a dataset of {}",
            config.train_size,
            data.len()
        )));
    }
    let mut rng = SplitMix64::new(trial_seed);
    let (train_indices, validation_indices) = partition(&mut rng, data.len(), config.train_size);

    let training = data.select(&train_indices);
    let model = Discriminator::train(&training);
    let circuit = synthesize(&model);

    let mut predictions = Vec::with_capacity(validation_indices.len());
    for &index in &validation_indices {
        let x = &data.features()[index];
        let predicted = match &config.noise {
            None => {
                let mut input = x.bits().to_vec();
                input.push(0);
                let output = run_circuit(&circuit, &StateVector::basis(&input))?;
                *output.readout()?.last().expect("non-empty register")
            }
            Some(noise) => noisy_infer(&circuit, x, noise, rng.next_u64()),
        };
        predictions.push(predicted);
    }

    let actual: Vec<u8> = validation_indices
        .iter()
        .map(|&i| data.labels()[i])
        .collect();
    Ok(score_trial(trial_index, predictions, &actual))
}

/// Tally a prediction list against the validation labels.
///
/// Precision and recall fall back to 1.0 on an empty denominator (no
/// predicted positives / no actual positives); the corresponding rates
/// fall back to 0.0.
fn score_trial(trial_index: usize, predictions: Vec<u8>, actual: &[u8]) -> TrialResult {
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut tn = 0usize;
    let mut fn_ = 0usize;
    for (&p, &y) in predictions.iter().zip(actual) {
        match (p, y) {
            (1, 1) => tp += 1,
            (1, 0) => fp += 1,
            (0, 0) => tn += 1,
            (0, 1) => fn_ += 1,
            _ => unreachable!("labels are validated to 0/1"),
        }
    }
    let accuracy = 1.0 - l1_error(&predictions, actual).expect("equal non-empty lists");
    let ratio = |num: usize, den: usize, empty: f64| {
        if den == 0 {
            empty
        } else {
            num as f64 / den as f64
        }
    };
    TrialResult {
        trial_index,
        predictions,
        accuracy,
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fn_,
        precision: ratio(tp, tp + fp, 1.0),
        recall: ratio(tp, tp + fn_, 1.0),
        false_positive_rate: ratio(fp, fp + tn, 0.0),
        false_negative_rate: ratio(fn_, tp + fn_, 0.0),
    }
}

/// Run every trial of an experiment and aggregate the statistics.
///
/// Trials execute in parallel (bounded by the ambient rayon pool); results
/// are reduced in trial order, so the outcome is identical at any thread
/// count.
pub fn run_experiment(
    data: &LabeledFeatureSet,
    config: &ExperimentConfig,
) -> Result<(ExperimentStats, Vec<TrialResult>), BenchError> {
    config.validate(data.len())?;
    let trials: Vec<TrialResult> = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(data, config, i, derive_stream(config.master_seed, i as u64)))
        .collect::<Result<_, _>>()?;
    let stats = ExperimentStats::from_trials(&trials);
    Ok((stats, trials))
}

#[derive(Serialize)]
struct TrialRow {
    trial: usize,
    accuracy: f64,
    tp: usize,
    fp: usize,
    tn: usize,
    #[serde(rename = "fn")]
    fn_: usize,
}

#[derive(Serialize)]
struct ResultsFile<'a> {
    config: &'a ExperimentConfig,
    stats: &'a ExperimentStats,
    trials: Vec<TrialRow>,
}

/// Write `results.json` and `histogram.csv` into `destination`.
///
/// Output is byte-stable for fixed inputs.
pub fn emit_results(
    config: &ExperimentConfig,
    stats: &ExperimentStats,
    trials: &[TrialResult],
    destination: &Path,
) -> Result<(), BenchError> {
    if trials.is_empty() {
        return Err(BenchError::EmptyTrials);
    }
    std::fs::create_dir_all(destination)?;

    let rows = trials
        .iter()
        .map(|t| TrialRow {
            trial: t.trial_index,
            accuracy: t.accuracy,
            tp: t.true_positives,
            fp: t.false_positives,
            tn: t.true_negatives,
            fn_: t.false_negatives,
        })
        .collect();
    let results = ResultsFile {
        config,
        stats,
        trials: rows,
    };
    let json = serde_json::to_string_pretty(&results).expect("results serialize cleanly");
    std::fs::write(destination.join("results.json"), json + "\n")?;

    let mut csv = Vec::new();
    writeln!(csv, "bin_lower,bin_upper,count")?;
    for (bin, &count) in stats.histogram().iter().enumerate() {
        let lower = bin as f64 * HISTOGRAM_BIN_WIDTH;
        let upper = lower + HISTOGRAM_BIN_WIDTH;
        writeln!(csv, "{lower},{upper},{count}")?;
    }
    std::fs::write(destination.join("histogram.csv"), csv)?;
    Ok(())
}
