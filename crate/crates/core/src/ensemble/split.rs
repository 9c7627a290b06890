//! Stratified holdout split and stratified k-fold assignment.

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extract::Label;

/// Split row indices into (train, test): per stratum, `round(fraction * n)`
/// rows are drawn without replacement into the test set. Strata are visited
/// in sorted key order, so the split depends only on (keys, fraction, seed).
pub fn stratified_split<K: Ord>(
    keys: &[K],
    test_fraction: f64,
    seed: u64,
) -> (Vec<usize>, Vec<usize>) {
    let mut strata: BTreeMap<&K, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        strata.entry(k).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test = Vec::new();
    for (_, mut indices) in strata {
        indices.shuffle(&mut rng);
        let n_test = (test_fraction * indices.len() as f64).round() as usize;
        test.extend(indices.into_iter().take(n_test));
    }
    test.sort_unstable();
    let mut in_test = vec![false; keys.len()];
    for &i in &test {
        in_test[i] = true;
    }
    let train = (0..keys.len()).filter(|&i| !in_test[i]).collect();
    (train, test)
}

/// Assign each row to one of `folds` validation folds, stratified by label.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::Stratification(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    for class in [Label::Strict, Label::Notional] {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == class)
            .map(|(i, _)| i)
            .collect();
        indices.shuffle(&mut rng);
        for (pos, i) in indices.into_iter().enumerate() {
            assignment[i] = pos % folds;
        }
    }
    // each fold's training complement must still contain both classes
    for fold in 0..folds {
        let mut counts = [0usize; 2];
        for (i, &f) in assignment.iter().enumerate() {
            if f != fold {
                match labels[i] {
                    Label::Strict => counts[0] += 1,
                    Label::Notional => counts[1] += 1,
                }
            }
        }
        if counts[0] == 0 || counts[1] == 0 {
            return Err(Error::Stratification(format!(
                "fold {fold} training part has a single class"
            )));
        }
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratum_of_100_puts_10_in_test() {
        let keys: Vec<u32> = vec![0; 100];
        let (train, test) = stratified_split(&keys, 0.10, 7);
        assert_eq!(test.len(), 10);
        assert_eq!(train.len(), 90);
    }

    #[test]
    fn stratum_of_7_rounds_to_1() {
        let keys: Vec<u32> = vec![0; 7];
        let (train, test) = stratified_split(&keys, 0.10, 7);
        assert_eq!(test.len(), 1);
        assert_eq!(train.len(), 6);
    }

    #[test]
    fn per_stratum_deviation_at_most_one_row() {
        let mut keys = Vec::new();
        for (k, n) in [(0u32, 37), (1, 88), (2, 5), (3, 140)] {
            keys.extend(std::iter::repeat_n(k, n));
        }
        let (_, test) = stratified_split(&keys, 0.10, 13);
        for (k, n) in [(0u32, 37usize), (1, 88), (2, 5), (3, 140)] {
            let got = test.iter().filter(|&&i| keys[i] == k).count() as f64;
            assert!((got - 0.10 * n as f64).abs() <= 1.0_f64.max(0.5 + 1e-9));
        }
    }

    #[test]
    fn split_is_deterministic_and_disjoint() {
        let keys: Vec<u32> = (0..50).map(|i| i % 3).collect();
        let a = stratified_split(&keys, 0.2, 3);
        let b = stratified_split(&keys, 0.2, 3);
        assert_eq!(a, b);
        let mut all: Vec<usize> = a.0.iter().chain(a.1.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn folds_are_stratified_and_cover_everything() {
        let labels: Vec<Label> = (0..40)
            .map(|i| {
                if i % 4 == 0 {
                    Label::Notional
                } else {
                    Label::Strict
                }
            })
            .collect();
        let assignment = stratified_folds(&labels, 5, 11).unwrap();
        assert_eq!(assignment.len(), 40);
        for fold in 0..5 {
            let notional = assignment
                .iter()
                .enumerate()
                .filter(|(i, f)| **f == fold && labels[*i] == Label::Notional)
                .count();
            assert_eq!(notional, 2);
        }
    }

    #[test]
    fn single_class_fold_training_part_is_error() {
        let labels = vec![Label::Strict, Label::Strict, Label::Strict, Label::Notional];
        // 4 rows, 4 folds: the notional row's fold trains strict-only
        assert!(matches!(
            stratified_folds(&labels, 4, 0),
            Err(Error::Stratification(_))
        ));
    }
}
