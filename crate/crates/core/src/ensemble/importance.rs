//! Gini feature importances: per tree, each split contributes its weighted
//! impurity decrease to its feature; per-tree totals are normalized to sum 1,
//! then averaged across trees with the standard deviation across trees as
//! the error estimate. One-hot members additionally sum into their named
//! feature for display.

use super::forest::Forest;
use super::tree::{gini, TreeNode};

#[derive(Debug, Clone)]
pub struct ImportanceEntry {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone)]
pub struct ImportanceReport {
    /// Per encoded column, in encoding order. Means sum to 1 when any tree
    /// split at all.
    pub encoded: Vec<ImportanceEntry>,
    /// One-hot groups summed into named features, sorted by mean descending.
    pub grouped: Vec<ImportanceEntry>,
    /// True when no tree contains a split (importances are all zero).
    pub no_splits: bool,
}

fn accumulate(node: &TreeNode, total: f64, acc: &mut [f64]) -> u64 {
    match node {
        TreeNode::Leaf { counts } => counts[0] + counts[1],
        TreeNode::Split {
            feature,
            left,
            right,
            ..
        } => {
            let nl = accumulate(left, total, acc);
            let nr = accumulate(right, total, acc);
            let n = nl + nr;
            let (cl, cr) = (leaf_counts(left), leaf_counts(right));
            let parent = (cl.0 + cr.0, cl.1 + cr.1);
            let decrease = gini(parent)
                - (nl as f64 / n as f64) * gini(cl)
                - (nr as f64 / n as f64) * gini(cr);
            acc[*feature] += (n as f64 / total) * decrease;
            n
        }
    }
}

/// Class counts of the subtree (sums of its leaves).
fn leaf_counts(node: &TreeNode) -> (u64, u64) {
    match node {
        TreeNode::Leaf { counts } => (counts[0], counts[1]),
        TreeNode::Split { left, right, .. } => {
            let l = leaf_counts(left);
            let r = leaf_counts(right);
            (l.0 + r.0, l.1 + r.1)
        }
    }
}

pub fn importances(forest: &Forest) -> ImportanceReport {
    let width = forest.encoding.width();
    let n_trees = forest.trees.len();
    let mut per_tree: Vec<Vec<f64>> = Vec::with_capacity(n_trees);
    for tree in &forest.trees {
        let total = leaf_counts(tree);
        let total = (total.0 + total.1) as f64;
        let mut acc = vec![0.0; width];
        accumulate(tree, total, &mut acc);
        let sum: f64 = acc.iter().sum();
        if sum > 0.0 {
            for v in &mut acc {
                *v /= sum;
            }
        }
        per_tree.push(acc);
    }
    let no_splits = per_tree.iter().all(|t| t.iter().all(|&v| v == 0.0));

    let stats = |values: &dyn Fn(&[f64]) -> f64| -> (f64, f64) {
        let xs: Vec<f64> = per_tree.iter().map(|t| values(t)).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        (mean, var.sqrt())
    };

    let names = forest.encoding.encoded_names();
    let encoded = (0..width)
        .map(|i| {
            let (mean, std) = stats(&|t: &[f64]| t[i]);
            ImportanceEntry {
                name: names[i].clone(),
                mean,
                std,
            }
        })
        .collect();

    let mut grouped: Vec<ImportanceEntry> = forest
        .encoding
        .groups()
        .into_iter()
        .map(|(name, range)| {
            let (mean, std) = stats(&|t: &[f64]| t[range.clone()].iter().sum());
            ImportanceEntry { name, mean, std }
        })
        .collect();
    grouped.sort_by(|a, b| {
        b.mean
            .partial_cmp(&a.mean)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.name.cmp(&b.name))
    });

    ImportanceReport {
        encoded,
        grouped,
        no_splits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::dataset::Dataset;
    use crate::ensemble::forest::{fit, FitParams, KRule};
    use crate::extract::Label;
    use crate::synthetic;

    #[test]
    fn single_split_tree_gives_full_importance_to_its_feature() {
        let rows = vec![
            vec![0.0, 5.0],
            vec![0.0, 5.0],
            vec![1.0, 5.0],
            vec![1.0, 5.0],
        ];
        let labels = vec![
            Label::Strict,
            Label::Strict,
            Label::Notional,
            Label::Notional,
        ];
        let data = Dataset::from_numeric(rows, labels);
        let params = FitParams {
            n_trees: 1,
            max_depth: None,
            k_rule: KRule::All,
        };
        let forest = fit(&data, &params, 5).unwrap();
        let report = importances(&forest);
        assert!(!report.no_splits);
        assert!((report.encoded[0].mean - 1.0).abs() < 1e-12);
        assert_eq!(report.encoded[1].mean, 0.0);
    }

    #[test]
    fn encoded_importances_sum_to_one() {
        let (rows, labels) = synthetic::separable(80, 6, 3);
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(&data, &FitParams::default(), 17).unwrap();
        let report = importances(&forest);
        let sum: f64 = report.encoded.iter().map(|e| e.mean).sum();
        assert!((sum - 1.0).abs() < 1e-9, "sum = {sum}");
        let gsum: f64 = report.grouped.iter().map(|e| e.mean).sum();
        assert!((gsum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn all_leaf_forest_reports_no_splits() {
        let rows = vec![vec![1.0], vec![2.0]];
        let labels = vec![Label::Strict, Label::Strict];
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(
            &data,
            &FitParams {
                n_trees: 4,
                max_depth: None,
                k_rule: KRule::All,
            },
            0,
        )
        .unwrap();
        let report = importances(&forest);
        assert!(report.no_splits);
        assert!(report.encoded.iter().all(|e| e.mean == 0.0));
    }
}
