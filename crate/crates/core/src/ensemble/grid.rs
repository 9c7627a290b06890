//! Grid search with stratified k-fold cross-validation.

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::forest::{fit, predict, FitParams, KRule};
use super::split::stratified_folds;
use crate::error::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_trees: Vec<usize>,
    pub max_depth: Vec<Option<usize>>,
    pub k_rule: Vec<KRule>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_trees: vec![100, 200, 300, 500],
            max_depth: vec![None, Some(10), Some(20)],
            k_rule: vec![KRule::Sqrt, KRule::Log2, KRule::All],
        }
    }
}

impl GridSpec {
    pub fn cells(&self) -> Vec<FitParams> {
        let mut out = Vec::new();
        for &n_trees in &self.n_trees {
            for &max_depth in &self.max_depth {
                for &k_rule in &self.k_rule {
                    out.push(FitParams {
                        n_trees,
                        max_depth,
                        k_rule,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CvCell {
    pub params: FitParams,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

/// unlimited depth sorts after any bound; used for the tie-break only
fn depth_rank(d: Option<usize>) -> usize {
    d.unwrap_or(usize::MAX)
}

fn k_rank(k: KRule) -> usize {
    match k {
        KRule::Sqrt => 0,
        KRule::Log2 => 1,
        KRule::All => 2,
    }
}

/// Cross-validated accuracy for every grid cell. The winner has the best
/// mean accuracy; ties break toward fewer trees, then shallower depth, then
/// sqrt before log2 before all.
pub fn grid_search(
    train: &Dataset,
    grid: &GridSpec,
    folds: usize,
    seed: u64,
) -> Result<(FitParams, Vec<CvCell>)> {
    let assignment = stratified_folds(&train.labels, folds, seed)?;
    let mut cells = Vec::new();
    for params in grid.cells() {
        let mut fold_accuracies = Vec::with_capacity(folds);
        for fold in 0..folds {
            let fit_idx: Vec<usize> = (0..train.len())
                .filter(|&i| assignment[i] != fold)
                .collect();
            let val_idx: Vec<usize> = (0..train.len())
                .filter(|&i| assignment[i] == fold)
                .collect();
            let fit_data = train.subset(&fit_idx);
            let forest = fit(&fit_data, &params, seed)?;
            let correct = val_idx
                .iter()
                .filter(|&&i| {
                    predict(&forest, &train.rows[i])
                        .map(|(l, _)| l == train.labels[i])
                        .unwrap_or(false)
                })
                .count();
            fold_accuracies.push(if val_idx.is_empty() {
                0.0
            } else {
                correct as f64 / val_idx.len() as f64
            });
        }
        let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
        cells.push(CvCell {
            params,
            fold_accuracies,
            mean_accuracy,
        });
    }
    let best = cells
        .iter()
        .min_by(|a, b| {
            b.mean_accuracy
                .partial_cmp(&a.mean_accuracy)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.params.n_trees.cmp(&b.params.n_trees))
                .then_with(|| depth_rank(a.params.max_depth).cmp(&depth_rank(b.params.max_depth)))
                .then_with(|| k_rank(a.params.k_rule).cmp(&k_rank(b.params.k_rule)))
        })
        .expect("grid is non-empty")
        .params;
    Ok((best, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::Label;
    use crate::synthetic;

    #[test]
    fn one_cell_grid_returns_that_cell() {
        let (rows, labels) = synthetic::separable(40, 3, 1);
        let data = Dataset::from_numeric(rows, labels);
        let grid = GridSpec {
            n_trees: vec![10],
            max_depth: vec![Some(4)],
            k_rule: vec![KRule::Sqrt],
        };
        let (best, cells) = grid_search(&data, &grid, 5, 3).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(best.n_trees, 10);
        assert_eq!(best.max_depth, Some(4));
    }

    #[test]
    fn perfectly_separating_cell_wins() {
        // depth 0 forces single-leaf trees (useless); unlimited depth separates
        let (rows, labels) = synthetic::separable(60, 3, 2);
        let data = Dataset::from_numeric(rows, labels);
        let grid = GridSpec {
            n_trees: vec![20],
            max_depth: vec![Some(0), None],
            k_rule: vec![KRule::All],
        };
        let (best, cells) = grid_search(&data, &grid, 5, 4).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(best.max_depth, None);
        let best_cell = cells.iter().find(|c| c.params.max_depth.is_none()).unwrap();
        assert!((best_cell.mean_accuracy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ties_break_toward_fewer_trees() {
        // both cells separate perfectly; 10 trees must win over 20
        let (rows, labels) = synthetic::separable(60, 3, 2);
        let data = Dataset::from_numeric(rows, labels);
        let grid = GridSpec {
            n_trees: vec![20, 10],
            max_depth: vec![None],
            k_rule: vec![KRule::All],
        };
        let (best, _) = grid_search(&data, &grid, 5, 4).unwrap();
        assert_eq!(best.n_trees, 10);
    }

    #[test]
    fn single_class_training_fold_is_stratification_error() {
        let rows = vec![vec![0.0]; 4];
        let labels = vec![Label::Strict, Label::Strict, Label::Strict, Label::Notional];
        let data = Dataset::from_numeric(rows, labels);
        let grid = GridSpec {
            n_trees: vec![2],
            max_depth: vec![None],
            k_rule: vec![KRule::All],
        };
        assert!(grid_search(&data, &grid, 4, 0).is_err());
    }
}
