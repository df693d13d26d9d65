//! Random forest over Gini-grown trees.
//!
//! Each tree trains on a bootstrap sample (n draws with replacement) and
//! considers floor(sqrt(d)) randomly chosen features at every node, split by
//! Gini impurity reduction. Tree i draws from an independent, seeded RNG
//! stream, so a forest is reproducible regardless of build parallelism.
//! Prediction is a majority vote with ties going to +1; the score is the
//! signed vote fraction.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{best_split, Node};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<Node>,
}

pub(super) fn features_per_node(d: usize) -> usize {
    ((d as f64).sqrt().floor() as usize).max(1)
}

/// Gini impurity reduction of a candidate split.
fn gini_gain(pos_l: usize, n_l: usize, pos_r: usize, n_r: usize) -> f64 {
    let gini = |pos: usize, n: usize| {
        let p = pos as f64 / n as f64;
        2.0 * p * (1.0 - p)
    };
    let n = n_l + n_r;
    let parent = gini(pos_l + pos_r, n);
    let wl = n_l as f64 / n as f64;
    let wr = n_r as f64 / n as f64;
    let gain = parent - wl * gini(pos_l, n_l) - wr * gini(pos_r, n_r);
    if gain <= 1e-12 {
        0.0
    } else {
        gain
    }
}

fn grow(z: &[Vec<f64>], y: &[i8], rows: &[usize], m: usize, rng: &mut ChaCha8Rng) -> Node {
    let pos = rows.iter().filter(|&&r| y[r] == 1).count();
    if pos == 0 || pos == rows.len() {
        return Node::leaf_from_labels(rows.iter().map(|&r| y[r]));
    }
    // Sorted so the candidate scan runs in ascending feature order and ties
    // resolve to the lowest index, same as the plain tree.
    let mut features: Vec<usize> = rand::seq::index::sample(rng, z[0].len(), m).into_vec();
    features.sort_unstable();
    match best_split(z, y, rows, &features, gini_gain) {
        Some(split) => Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(grow(z, y, &split.left, m, rng)),
            right: Box::new(grow(z, y, &split.right, m, rng)),
        },
        None => Node::leaf_from_labels(rows.iter().map(|&r| y[r])),
    }
}

pub fn fit(z: &[Vec<f64>], y: &[i8], tree_count: usize, seed: u64) -> ForestModel {
    let n = z.len();
    let m = features_per_node(z[0].len());
    let trees = (0..tree_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            grow(z, y, &rows, m, &mut rng)
        })
        .collect();
    ForestModel { trees }
}

pub fn predict(model: &ForestModel, z: &[f64]) -> i8 {
    if score(model, z) >= 0.0 {
        1
    } else {
        -1
    }
}

/// Signed vote fraction in [-1, 1]: (votes for +1 minus votes for -1) / trees.
pub fn score(model: &ForestModel, z: &[f64]) -> f64 {
    let pos = model
        .trees
        .iter()
        .filter(|tree| tree.walk(z).0 == 1)
        .count();
    let total = model.trees.len();
    (2 * pos) as f64 / total as f64 - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::test_support::ring_data;

    fn leaf(label: i8) -> Node {
        Node::Leaf {
            label,
            margin: label as f64,
        }
    }

    #[test]
    fn majority_vote_and_vote_fraction() {
        let model = ForestModel {
            trees: vec![leaf(1), leaf(1), leaf(-1)],
        };
        assert_eq!(predict(&model, &[0.0]), 1);
        assert!((score(&model, &[0.0]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn even_vote_ties_to_positive() {
        let model = ForestModel {
            trees: vec![leaf(1), leaf(-1)],
        };
        assert_eq!(score(&model, &[0.0]), 0.0);
        assert_eq!(predict(&model, &[0.0]), 1);
    }

    #[test]
    fn bootstrap_makes_trees_differ() {
        let set = ring_data(40, 3);
        let model = fit(&set.x, &set.y, 10, 12);
        assert!(model.trees.iter().any(|t| *t != model.trees[0]));
    }

    #[test]
    fn feature_count_rule() {
        assert_eq!(features_per_node(1), 1);
        assert_eq!(features_per_node(3), 1);
        assert_eq!(features_per_node(4), 2);
        assert_eq!(features_per_node(105), 10);
        assert_eq!(features_per_node(121), 11);
    }

    #[test]
    fn forest_handles_radial_structure() {
        let set = ring_data(100, 21);
        let model = fit(&set.x, &set.y, 50, 5);
        let correct = set
            .x
            .iter()
            .zip(set.y.iter())
            .filter(|(row, &label)| predict(&model, row) == label)
            .count();
        assert!(correct as f64 / set.len() as f64 > 0.95);
    }

    #[test]
    fn single_class_input_is_a_constant_forest() {
        let z = vec![vec![0.0], vec![1.0], vec![2.0]];
        let model = fit(&z, &[-1, -1, -1], 5, 0);
        assert_eq!(predict(&model, &[10.0]), -1);
        assert_eq!(score(&model, &[10.0]), -1.0);
    }
}
