//! Gain-ratio decision tree in the C4.5 style.
//!
//! Continuous features only: every split is `value <= threshold` with the
//! threshold at the midpoint between two consecutive distinct values seen at
//! the node. The split maximizing gain ratio (information gain over split
//! entropy) wins; ties go to the lowest feature index, then the lowest
//! threshold. Nodes become leaves when pure or when no split has positive
//! gain. No pruning. Leaves store the majority label (ties prefer +1) and
//! the signed vote fraction as a confidence score.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    root: Node,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(super) enum Node {
    Leaf {
        label: i8,
        /// (n_pos - n_neg) / n over the training rows that reached the leaf.
        margin: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub(super) fn leaf_from_labels<I: Iterator<Item = i8>>(labels: I) -> Node {
        let mut pos = 0usize;
        let mut total = 0usize;
        for l in labels {
            total += 1;
            if l == 1 {
                pos += 1;
            }
        }
        let neg = total - pos;
        Node::Leaf {
            label: if pos >= neg { 1 } else { -1 },
            margin: (pos as f64 - neg as f64) / total as f64,
        }
    }

    pub(super) fn walk(&self, z: &[f64]) -> (i8, f64) {
        let mut node = self;
        loop {
            match node {
                Node::Leaf { label, margin } => return (*label, *margin),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if z[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }
}

/// Binary entropy of a label multiset, in bits.
fn entropy(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let mut h = 0.0;
    for count in [pos, total - pos] {
        if count > 0 {
            let p = count as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

pub(super) struct BestSplit {
    pub feature: usize,
    pub threshold: f64,
    /// Row indices with value <= threshold.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Scans candidate splits of `rows` along `features` and returns the one
/// with the best score, or None when no candidate improves on the node
/// (score <= 0). `score` maps (pos_left, n_left, pos_right, n_right) to the
/// quantity to maximize; the scan order makes ties deterministic.
pub(super) fn best_split<F>(
    z: &[Vec<f64>],
    y: &[i8],
    rows: &[usize],
    features: &[usize],
    mut score: F,
) -> Option<BestSplit>
where
    F: FnMut(usize, usize, usize, usize) -> f64,
{
    let n = rows.len();
    let total_pos = rows.iter().filter(|&&r| y[r] == 1).count();
    let mut best: Option<(f64, usize, f64)> = None;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for &feature in features {
        order.clear();
        order.extend_from_slice(rows);
        order.sort_by(|&a, &b| z[a][feature].total_cmp(&z[b][feature]));
        let mut pos_left = 0usize;
        for (i, &row) in order.iter().enumerate().take(n - 1) {
            if y[row] == 1 {
                pos_left += 1;
            }
            let v = z[row][feature];
            let next = z[order[i + 1]][feature];
            if v == next {
                continue;
            }
            let threshold = (v + next) / 2.0;
            // Midpoints can round onto the upper value; such a threshold
            // would not separate the pair, so fall back to the lower value.
            let threshold = if threshold >= next { v } else { threshold };
            let n_left = i + 1;
            let s = score(pos_left, n_left, total_pos - pos_left, n - n_left);
            let better = match best {
                None => s > 0.0,
                Some((bs, bf, bt)) => {
                    s > bs || (s == bs && (feature < bf || (feature == bf && threshold < bt)))
                }
            };
            if better {
                best = Some((s, feature, threshold));
            }
        }
    }
    let (_, feature, threshold) = best?;
    let (left, right) = rows
        .iter()
        .copied()
        .partition(|&r| z[r][feature] <= threshold);
    Some(BestSplit {
        feature,
        threshold,
        left,
        right,
    })
}

/// Information gain divided by the entropy of the partition itself.
fn gain_ratio(pos_l: usize, n_l: usize, pos_r: usize, n_r: usize) -> f64 {
    let n = n_l + n_r;
    let parent = entropy(pos_l + pos_r, n);
    let wl = n_l as f64 / n as f64;
    let wr = n_r as f64 / n as f64;
    let gain = parent - wl * entropy(pos_l, n_l) - wr * entropy(pos_r, n_r);
    if gain <= 1e-12 {
        return 0.0;
    }
    let split_info = -(wl * wl.log2() + wr * wr.log2());
    gain / split_info
}

fn grow(z: &[Vec<f64>], y: &[i8], rows: &[usize], features: &[usize]) -> Node {
    let pos = rows.iter().filter(|&&r| y[r] == 1).count();
    if pos == 0 || pos == rows.len() {
        return Node::leaf_from_labels(rows.iter().map(|&r| y[r]));
    }
    match best_split(z, y, rows, features, gain_ratio) {
        Some(split) => Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(grow(z, y, &split.left, features)),
            right: Box::new(grow(z, y, &split.right, features)),
        },
        None => Node::leaf_from_labels(rows.iter().map(|&r| y[r])),
    }
}

pub fn fit(z: &[Vec<f64>], y: &[i8]) -> TreeModel {
    let rows: Vec<usize> = (0..z.len()).collect();
    let features: Vec<usize> = (0..z[0].len()).collect();
    TreeModel {
        root: grow(z, y, &rows, &features),
    }
}

pub fn predict(model: &TreeModel, z: &[f64]) -> i8 {
    model.root.walk(z).0
}

pub fn score(model: &TreeModel, z: &[f64]) -> f64 {
    model.root.walk(z).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_threshold_lands_on_the_midpoint() {
        let z = vec![vec![1.0], vec![3.0]];
        let y = vec![-1, 1];
        let model = fit(&z, &y);
        match &model.root {
            Node::Split {
                feature, threshold, ..
            } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 2.0);
            }
            other => panic!("expected a split, got {other:?}"),
        }
        assert_eq!(predict(&model, &[1.9]), -1);
        assert_eq!(predict(&model, &[2.0]), -1);
        assert_eq!(predict(&model, &[2.1]), 1);
        assert_eq!(score(&model, &[0.0]), -1.0);
        assert_eq!(score(&model, &[9.0]), 1.0);
    }

    #[test]
    fn pure_input_becomes_a_single_leaf() {
        let z = vec![vec![0.0], vec![5.0], vec![2.0]];
        let model = fit(&z, &[-1, -1, -1]);
        assert_eq!(model.root, Node::Leaf { label: -1, margin: -1.0 });
    }

    #[test]
    fn tied_leaf_prefers_positive() {
        // Identical rows, opposite labels: nothing to split on.
        let z = vec![vec![1.0, 2.0], vec![1.0, 2.0]];
        let model = fit(&z, &[-1, 1]);
        assert_eq!(model.root, Node::Leaf { label: 1, margin: 0.0 });
        assert_eq!(predict(&model, &[1.0, 2.0]), 1);
        assert_eq!(score(&model, &[1.0, 2.0]), 0.0);
    }

    #[test]
    fn balanced_xor_defeats_greedy_gain() {
        // Every single threshold leaves both children at entropy 1, so a
        // greedy gain-ratio tree cannot split at all and falls back to the
        // tied leaf.
        let z = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        let model = fit(&z, &[-1, 1, 1, -1]);
        assert_eq!(model.root, Node::Leaf { label: 1, margin: 0.0 });
    }

    #[test]
    fn unbalanced_xor_fits_in_two_levels() {
        // Doubling one corner gives the root split positive gain; the
        // children are then cleanly separable.
        let z = vec![
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        let y = vec![-1, -1, 1, 1, -1];
        let model = fit(&z, &y);
        for (row, &label) in z.iter().zip(y.iter()) {
            assert_eq!(predict(&model, row), label);
        }
        assert!(matches!(
            &model.root,
            Node::Split { left, right, .. }
                if matches!(**left, Node::Split { .. }) && matches!(**right, Node::Split { .. })
        ));
    }

    #[test]
    fn informative_feature_beats_constant_one() {
        // Feature 0 never varies, feature 1 separates the classes.
        let z = vec![
            vec![7.0, 0.0],
            vec![7.0, 1.0],
            vec![7.0, 10.0],
            vec![7.0, 11.0],
        ];
        let y = vec![-1, -1, 1, 1];
        let model = fit(&z, &y);
        match &model.root {
            Node::Split {
                feature, threshold, ..
            } => {
                assert_eq!(*feature, 1);
                assert_eq!(*threshold, 5.5);
            }
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn equal_gain_prefers_the_lower_feature_index() {
        // Both features produce the identical partition, so the scores tie.
        let z = vec![vec![0.0, 10.0], vec![1.0, 11.0]];
        let y = vec![-1, 1];
        let model = fit(&z, &y);
        match &model.root {
            Node::Split { feature, .. } => assert_eq!(*feature, 0),
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn three_band_pattern_fits_training_exactly() {
        let z: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64 / 10.0]).collect();
        let y: Vec<i8> = (0..30)
            .map(|i| {
                let v = i as f64 / 10.0;
                if v < 1.0 || v >= 2.0 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let model = fit(&z, &y);
        for (row, &label) in z.iter().zip(y.iter()) {
            assert_eq!(predict(&model, row), label);
        }
    }

    #[test]
    fn mixed_leaf_margin_is_the_vote_fraction() {
        let node = Node::leaf_from_labels([1, 1, 1, -1].into_iter());
        assert_eq!(node, Node::Leaf { label: 1, margin: 0.5 });
    }

    #[test]
    fn adjacent_floats_do_not_recurse_forever() {
        // The midpoint of two adjacent floats rounds onto the upper value;
        // the threshold must then fall back to the lower value so that the
        // pair still separates.
        let lo = 1.0f64;
        let hi = f64::from_bits(lo.to_bits() + 1);
        let model = fit(&vec![vec![lo], vec![hi]], &[-1, 1]);
        assert_eq!(predict(&model, &[lo]), -1);
        assert_eq!(predict(&model, &[hi]), 1);
    }
}
