//! Evaluation report: accuracy, confusion matrix, majority baselines and
//! per-class precision/recall. Classes order as (strict, notional) on both
//! axes, rows actual and columns predicted.

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::forest::{predict, Forest};
use crate::error::{Error, Result};
use crate::extract::Label;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    /// `confusion[actual][predicted]`, classes (strict, notional).
    pub confusion: [[u64; 2]; 2],
    /// Share of the larger actual class in the evaluated set.
    pub majority_baseline: f64,
    /// Majority share over the full extracted corpus, when known.
    pub corpus_baseline: Option<f64>,
    /// Per class (strict, notional).
    pub precision: [f64; 2],
    pub recall: [f64; 2],
}

impl EvalReport {
    pub fn from_confusion(confusion: [[u64; 2]; 2]) -> Result<EvalReport> {
        let total: u64 = confusion.iter().flatten().sum();
        if total == 0 {
            return Err(Error::EmptyDataset("empty confusion matrix".into()));
        }
        let diag = confusion[0][0] + confusion[1][1];
        let row = [
            confusion[0][0] + confusion[0][1],
            confusion[1][0] + confusion[1][1],
        ];
        let col = [
            confusion[0][0] + confusion[1][0],
            confusion[0][1] + confusion[1][1],
        ];
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        Ok(EvalReport {
            accuracy: diag as f64 / total as f64,
            confusion,
            majority_baseline: row.iter().max().copied().unwrap_or(0) as f64 / total as f64,
            corpus_baseline: None,
            precision: [
                ratio(confusion[0][0], col[0]),
                ratio(confusion[1][1], col[1]),
            ],
            recall: [
                ratio(confusion[0][0], row[0]),
                ratio(confusion[1][1], row[1]),
            ],
        })
    }

    pub fn with_corpus_baseline(mut self, majority: u64, total: u64) -> EvalReport {
        if total > 0 {
            self.corpus_baseline = Some(majority as f64 / total as f64);
        }
        self
    }
}

pub fn evaluate(forest: &Forest, test: &Dataset) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::EmptyDataset("empty test set".into()));
    }
    let mut confusion = [[0u64; 2]; 2];
    for (row, label) in test.rows.iter().zip(&test.labels) {
        let (pred, _) = predict(forest, row)?;
        let a = match label {
            Label::Strict => 0,
            Label::Notional => 1,
        };
        let p = match pred {
            Label::Strict => 0,
            Label::Notional => 1,
        };
        confusion[a][p] += 1;
    }
    EvalReport::from_confusion(confusion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::forest::{fit, FitParams, KRule};
    use crate::synthetic;

    #[test]
    fn published_confusion_arithmetic() {
        let report = EvalReport::from_confusion([[222, 39], [7, 81]]).unwrap();
        assert!((report.accuracy - 303.0 / 349.0).abs() < 1e-12);
        assert!((report.accuracy - 0.8681).abs() < 1e-4);
        assert!((report.precision[1] - 0.675).abs() < 1e-12);
        assert!((report.recall[1] - 81.0 / 88.0).abs() < 1e-12);
        assert!((report.majority_baseline - 261.0 / 349.0).abs() < 1e-12);
    }

    #[test]
    fn accuracy_recomputes_from_confusion_counts() {
        let report = EvalReport::from_confusion([[222, 39], [7, 81]]).unwrap();
        let total: u64 = report.confusion.iter().flatten().sum();
        let diag = report.confusion[0][0] + report.confusion[1][1];
        assert!((report.accuracy - diag as f64 / total as f64).abs() < 1e-15);
    }

    #[test]
    fn perfect_predictions_have_zero_off_diagonal() {
        let (rows, labels) = synthetic::separable(50, 4, 21);
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(
            &data,
            &FitParams {
                n_trees: 30,
                max_depth: None,
                k_rule: KRule::Sqrt,
            },
            2,
        )
        .unwrap();
        let report = evaluate(&forest, &data).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.confusion[0][1], 0);
        assert_eq!(report.confusion[1][0], 0);
    }

    #[test]
    fn empty_test_set_is_error() {
        let (rows, labels) = synthetic::separable(10, 2, 0);
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(
            &data,
            &FitParams {
                n_trees: 2,
                max_depth: None,
                k_rule: KRule::All,
            },
            0,
        )
        .unwrap();
        let empty = Dataset::from_numeric(Vec::new(), Vec::new());
        assert!(evaluate(&forest, &empty).is_err());
    }

    #[test]
    fn corpus_baseline_from_full_counts() {
        let report = EvalReport::from_confusion([[1, 0], [0, 1]])
            .unwrap()
            .with_corpus_baseline(2279, 3488);
        let b = report.corpus_baseline.unwrap();
        assert!((b - 0.6534).abs() < 1e-3);
    }
}
