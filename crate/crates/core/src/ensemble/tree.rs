//! Single extremely randomized tree.
//!
//! At each node, K distinct non-constant features are drawn uniformly; each
//! candidate gets one uniform random cut point strictly inside its value
//! range at the node; the candidate with the greatest Gini impurity decrease
//! wins (first maximum in draw order). Trees grow until pure, out of rows,
//! out of varying features, or at the depth bound. No bootstrap: every tree
//! sees all rows.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::extract::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        /// (strict, notional) training rows reaching this leaf.
        counts: [u64; 2],
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf_for(&self, row: &[f64]) -> &TreeNode {
        match self {
            TreeNode::Leaf { .. } => self,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if row[*feature] <= *threshold {
                    left.leaf_for(row)
                } else {
                    right.leaf_for(row)
                }
            }
        }
    }
}

/// Gini impurity of a two-class count pair: `1 - p0^2 - p1^2`, 0 when empty.
pub fn gini(counts: (u64, u64)) -> f64 {
    let n = (counts.0 + counts.1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = counts.0 as f64 / n;
    let p1 = counts.1 as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

fn count_labels(labels: &[Label], indices: &[u32]) -> [u64; 2] {
    let mut counts = [0u64; 2];
    for &i in indices {
        match labels[i as usize] {
            Label::Strict => counts[0] += 1,
            Label::Notional => counts[1] += 1,
        }
    }
    counts
}

/// Uniform draw in (0, 1]; the zero draw is rejected so that thresholds
/// land strictly above the node minimum.
fn positive_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

pub(crate) fn fit_tree(
    rows: &[Vec<f64>],
    labels: &[Label],
    width: usize,
    k: usize,
    max_depth: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let indices: Vec<u32> = (0..rows.len() as u32).collect();
    grow(rows, labels, width, k, max_depth, &indices, 0, rng)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    rows: &[Vec<f64>],
    labels: &[Label],
    width: usize,
    k: usize,
    max_depth: Option<usize>,
    indices: &[u32],
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let counts = count_labels(labels, indices);
    let at_depth_bound = max_depth.is_some_and(|d| depth >= d);
    if indices.len() < 2 || counts[0] == 0 || counts[1] == 0 || at_depth_bound {
        return TreeNode::Leaf { counts };
    }

    // non-constant features at this node, in index order
    let mut varying: Vec<usize> = Vec::new();
    for f in 0..width {
        let first = rows[indices[0] as usize][f];
        if indices.iter().any(|&i| rows[i as usize][f] != first) {
            varying.push(f);
        }
    }
    if varying.is_empty() {
        return TreeNode::Leaf { counts };
    }

    // draw K distinct candidates by partial Fisher-Yates
    let k_eff = k.min(varying.len());
    for i in 0..k_eff {
        let j = rng.random_range(i..varying.len());
        varying.swap(i, j);
    }

    let parent_gini = gini((counts[0], counts[1]));
    let n = indices.len() as f64;
    let mut best: Option<(f64, usize, f64)> = None; // (score, feature, threshold)
    for &feature in &varying[..k_eff] {
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        for &i in indices {
            let v = rows[i as usize][feature];
            mn = mn.min(v);
            mx = mx.max(v);
        }
        let mut threshold = mn + positive_unit(rng) * (mx - mn);
        if threshold >= mx {
            // rounding pushed the cut onto the maximum; fall back to the
            // minimum, which still separates min rows from the rest
            threshold = mn;
        }
        let mut left = [0u64; 2];
        let mut right = [0u64; 2];
        for &i in indices {
            let side = if rows[i as usize][feature] <= threshold {
                &mut left
            } else {
                &mut right
            };
            match labels[i as usize] {
                Label::Strict => side[0] += 1,
                Label::Notional => side[1] += 1,
            }
        }
        let nl = (left[0] + left[1]) as f64;
        let nr = (right[0] + right[1]) as f64;
        let score =
            parent_gini - nl / n * gini((left[0], left[1])) - nr / n * gini((right[0], right[1]));
        if best.as_ref().is_none_or(|(s, _, _)| score > *s) {
            best = Some((score, feature, threshold));
        }
    }

    let (_, feature, threshold) = best.expect("at least one candidate");
    let (left_idx, right_idx): (Vec<u32>, Vec<u32>) = indices
        .iter()
        .partition(|&&i| rows[i as usize][feature] <= threshold);
    debug_assert!(!left_idx.is_empty() && !right_idx.is_empty());
    TreeNode::Split {
        feature,
        threshold,
        left: Box::new(grow(
            rows,
            labels,
            width,
            k,
            max_depth,
            &left_idx,
            depth + 1,
            rng,
        )),
        right: Box::new(grow(
            rows,
            labels,
            width,
            k,
            max_depth,
            &right_idx,
            depth + 1,
            rng,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gini_balanced_is_half() {
        assert!((gini((5, 5)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gini_pure_is_zero() {
        assert_eq!(gini((10, 0)), 0.0);
        assert_eq!(gini((0, 7)), 0.0);
        assert_eq!(gini((0, 0)), 0.0);
    }

    #[test]
    fn gini_test_marginals() {
        // 261 strict / 88 notional: 1 - (261/349)^2 - (88/349)^2
        assert!((gini((261, 88)) - 0.3771).abs() < 1e-4);
    }

    #[test]
    fn gini_bounds() {
        for a in 0..20u64 {
            for b in 0..20u64 {
                let g = gini((a, b));
                assert!((0.0..=0.5).contains(&g), "gini({a},{b}) = {g}");
            }
        }
    }
}
