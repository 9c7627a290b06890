//! Forest fitting, prediction and serialization.
//!
//! Per-tree random streams are derived from `(seed, tree index)`, so fitting
//! is schedule-independent: any thread count produces the identical forest,
//! and serialization is byte-stable for a fixed seed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Encoding};
use super::tree::{fit_tree, TreeNode};
use crate::error::{Error, Result};
use crate::extract::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KRule {
    Sqrt,
    Log2,
    All,
}

impl KRule {
    /// Candidate features per split; square root and log are rounded up.
    pub fn k(self, width: usize) -> usize {
        let k = match self {
            KRule::Sqrt => (width as f64).sqrt().ceil() as usize,
            KRule::Log2 => (width as f64).log2().ceil() as usize,
            KRule::All => width,
        };
        k.clamp(1, width.max(1))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KRule::Sqrt => "sqrt",
            KRule::Log2 => "log2",
            KRule::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    pub n_trees: usize,
    /// `None` grows trees without a depth bound.
    pub max_depth: Option<usize>,
    pub k_rule: KRule,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            n_trees: 300,
            max_depth: None,
            k_rule: KRule::Sqrt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub format_version: u32,
    pub params: FitParams,
    pub seed: u64,
    pub feature_names: Vec<String>,
    pub encoding: Encoding,
    pub trees: Vec<TreeNode>,
}

/// Random stream of tree `tree_index` in a forest seeded with `seed`.
/// Exposed so that structural oracles can consume the identical draws.
pub fn tree_rng(seed: u64, tree_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tree_index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Fit an extremely randomized forest. Every tree sees the full dataset.
pub fn fit(data: &Dataset, params: &FitParams, seed: u64) -> Result<Forest> {
    if data.is_empty() {
        return Err(Error::EmptyDataset("cannot fit on zero rows".into()));
    }
    let width = data.width();
    let k = params.k_rule.k(width);
    let trees: Vec<TreeNode> = (0..params.n_trees as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = tree_rng(seed, t);
            fit_tree(
                &data.rows,
                &data.labels,
                width,
                k,
                params.max_depth,
                &mut rng,
            )
        })
        .collect();
    Ok(Forest {
        format_version: 1,
        params: *params,
        seed,
        feature_names: data.encoding.encoded_names(),
        encoding: data.encoding.clone(),
        trees,
    })
}

/// Mean leaf frequency of the notional class across trees. The label is
/// notional only above 0.5; an exact tie goes to strict, the majority class.
pub fn predict(forest: &Forest, row: &[f64]) -> Result<(Label, f64)> {
    let p = predict_proba(forest, row)?;
    let label = if p > 0.5 {
        Label::Notional
    } else {
        Label::Strict
    };
    Ok((label, p))
}

pub fn predict_proba(forest: &Forest, row: &[f64]) -> Result<f64> {
    if row.len() != forest.encoding.width() {
        return Err(Error::Encoding(format!(
            "row width {} does not match model width {}",
            row.len(),
            forest.encoding.width()
        )));
    }
    let mut sum = 0.0;
    for tree in &forest.trees {
        if let TreeNode::Leaf { counts } = tree.leaf_for(row) {
            let n = counts[0] + counts[1];
            if n > 0 {
                sum += counts[1] as f64 / n as f64;
            }
        }
    }
    Ok(sum / forest.trees.len() as f64)
}

impl Forest {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Forest> {
        let forest: Forest = serde_json::from_str(text)?;
        if forest.format_version != 1 {
            return Err(Error::Encoding(format!(
                "unsupported model format version {}",
                forest.format_version
            )));
        }
        Ok(forest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    #[test]
    fn separable_feature_gives_perfect_training_accuracy() {
        let (rows, labels) = synthetic::separable(60, 4, 9);
        let data = Dataset::from_numeric(rows.clone(), labels.clone());
        let params = FitParams {
            n_trees: 20,
            max_depth: None,
            k_rule: KRule::Sqrt,
        };
        let forest = fit(&data, &params, 1).unwrap();
        let correct = rows
            .iter()
            .zip(&labels)
            .filter(|(r, l)| predict(&forest, r).unwrap().0 == **l)
            .count();
        assert_eq!(correct, rows.len());
    }

    #[test]
    fn single_class_dataset_fits_single_leaves() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]];
        let labels = vec![Label::Strict; 3];
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(&data, &FitParams::default(), 3).unwrap();
        assert!(forest
            .trees
            .iter()
            .all(|t| matches!(t, TreeNode::Leaf { counts: [3, 0] })));
        let (label, p) = predict(&forest, &[0.2, 0.2]).unwrap();
        assert_eq!(label, Label::Strict);
        assert_eq!(p, 0.0);
    }

    #[test]
    fn pure_notional_leaves_predict_notional_with_probability_one() {
        let rows = vec![vec![0.0], vec![1.0]];
        let labels = vec![Label::Notional; 2];
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(&data, &FitParams::default(), 8).unwrap();
        let (label, p) = predict(&forest, &[0.4]).unwrap();
        assert_eq!(label, Label::Notional);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn empty_dataset_is_an_error() {
        let data = Dataset::from_numeric(Vec::new(), Vec::new());
        assert!(matches!(
            fit(&data, &FitParams::default(), 0),
            Err(Error::EmptyDataset(_))
        ));
    }

    #[test]
    fn tie_probability_goes_to_strict() {
        // one tree, leaf counts (3, 1): probability 0.25 -> strict
        let rows = vec![vec![0.0], vec![0.0], vec![0.0], vec![0.0]];
        let labels = vec![Label::Strict, Label::Strict, Label::Strict, Label::Notional];
        let data = Dataset::from_numeric(rows, labels);
        let params = FitParams {
            n_trees: 1,
            max_depth: Some(0),
            k_rule: KRule::All,
        };
        let forest = fit(&data, &params, 0).unwrap();
        let (label, p) = predict(&forest, &[0.0]).unwrap();
        assert_eq!(label, Label::Strict);
        assert!((p - 0.25).abs() < 1e-12);
        // exact 0.5 ties break to strict
        let rows = vec![vec![0.0], vec![0.0]];
        let labels = vec![Label::Strict, Label::Notional];
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(&data, &params, 0).unwrap();
        let (label, p) = predict(&forest, &[0.0]).unwrap();
        assert_eq!(p, 0.5);
        assert_eq!(label, Label::Strict);
    }

    #[test]
    fn probability_is_in_unit_interval() {
        let (rows, labels) = synthetic::separable(40, 3, 5);
        let data = Dataset::from_numeric(rows.clone(), labels);
        let forest = fit(
            &data,
            &FitParams {
                n_trees: 15,
                max_depth: Some(2),
                k_rule: KRule::Sqrt,
            },
            7,
        )
        .unwrap();
        for r in &rows {
            let p = predict_proba(&forest, r).unwrap();
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn width_mismatch_is_encoding_error() {
        let (rows, labels) = synthetic::separable(10, 3, 2);
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
        assert!(matches!(predict(&forest, &[1.0]), Err(Error::Encoding(_))));
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let (rows, labels) = synthetic::separable(30, 4, 11);
        let data = Dataset::from_numeric(rows, labels);
        let forest = fit(&data, &FitParams::default(), 42).unwrap();
        let json = forest.to_json().unwrap();
        let back = Forest::from_json(&json).unwrap();
        assert_eq!(back, forest);
        assert_eq!(back.to_json().unwrap(), json);
    }
}
