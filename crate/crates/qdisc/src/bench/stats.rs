use serde::Serialize;

use super::TrialResult;

/// Accuracy histogram geometry: 40 bins of 2.5 percentage points over
/// `[0, 100]`, the last bin closed above.
pub const HISTOGRAM_BINS: usize = 40;
pub const HISTOGRAM_BIN_WIDTH: f64 = 2.5;

/// Five-number summary of one metric across trials.
///
/// The standard deviation is the population form (divisor = trial count);
/// the median of an even count is the mean of the two middle values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl MetricSummary {
    fn from_values(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "summary of no values");
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
        };
        MetricSummary {
            mean,
            std: variance.sqrt(),
            min: sorted[0],
            max: *sorted.last().unwrap(),
            median,
        }
    }
}

/// Aggregate statistics over an experiment's trials.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentStats {
    pub accuracy: MetricSummary,
    pub precision: MetricSummary,
    pub recall: MetricSummary,
    pub fnr: MetricSummary,
    /// Accuracy histogram; lives in `histogram.csv`, not `results.json`.
    #[serde(skip)]
    histogram: [u64; HISTOGRAM_BINS],
}

impl ExperimentStats {
    pub fn from_trials(trials: &[TrialResult]) -> Self {
        let collect = |f: fn(&TrialResult) -> f64| trials.iter().map(f).collect::<Vec<_>>();
        let mut histogram = [0u64; HISTOGRAM_BINS];
        for trial in trials {
            let percent = trial.accuracy * 100.0;
            let bin = ((percent / HISTOGRAM_BIN_WIDTH) as usize).min(HISTOGRAM_BINS - 1);
            histogram[bin] += 1;
        }
        ExperimentStats {
            accuracy: MetricSummary::from_values(&collect(|t| t.accuracy)),
            precision: MetricSummary::from_values(&collect(|t| t.precision)),
            recall: MetricSummary::from_values(&collect(|t| t.recall)),
            fnr: MetricSummary::from_values(&collect(|t| t.false_negative_rate)),
            histogram,
        }
    }

    pub fn histogram(&self) -> &[u64; HISTOGRAM_BINS] {
        &self.histogram
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(accuracy: f64) -> TrialResult {
        TrialResult {
            trial_index: 0,
            predictions: vec![],
            accuracy,
            true_positives: 0,
            false_positives: 0,
            true_negatives: 0,
            false_negatives: 0,
            precision: 1.0,
            recall: 1.0,
            false_positive_rate: 0.0,
            false_negative_rate: 0.0,
        }
    }

    #[test]
    fn summary_of_known_values() {
        let trials: Vec<TrialResult> = [0.5, 1.0, 0.75, 0.25].iter().map(|&a| trial(a)).collect();
        let stats = ExperimentStats::from_trials(&trials);
        assert_eq!(stats.accuracy.mean, 0.625);
        assert_eq!(stats.accuracy.min, 0.25);
        assert_eq!(stats.accuracy.max, 1.0);
        assert_eq!(stats.accuracy.median, 0.625);
        // population std of {0.25, 0.5, 0.75, 1.0}
        let expected_std = (0.078125f64).sqrt();
        assert!((stats.accuracy.std - expected_std).abs() < 1e-15);
        assert!(stats.accuracy.min <= stats.accuracy.median);
        assert!(stats.accuracy.median <= stats.accuracy.max);
    }

    #[test]
    fn histogram_bins_by_accuracy_percent() {
        let trials: Vec<TrialResult> = [0.0, 0.024, 0.025, 0.99, 1.0, 1.0]
            .iter()
            .map(|&a| trial(a))
            .collect();
        let stats = ExperimentStats::from_trials(&trials);
        let histogram = stats.histogram();
        assert_eq!(histogram[0], 2); // 0.0% and 2.4%
        assert_eq!(histogram[1], 1); // 2.5%
        assert_eq!(histogram[39], 3); // 99% and the two 100%s share the top bin
        assert_eq!(histogram.iter().sum::<u64>(), trials.len() as u64);
    }

    #[test]
    fn odd_count_median_is_the_middle_value() {
        let trials: Vec<TrialResult> = [0.9, 0.1, 0.5].iter().map(|&a| trial(a)).collect();
        assert_eq!(ExperimentStats::from_trials(&trials).accuracy.median, 0.5);
    }
}
