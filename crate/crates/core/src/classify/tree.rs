//! CART-style decision tree with Gini impurity splits.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_DEPTH: usize = 8;
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        attack: bool,
        confidence: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeParams {
    pub nodes: Vec<TreeNode>,
}

fn gini(attack: f64, total: f64) -> f64 {
    if total == 0.0 {
        return 0.0;
    }
    let p = attack / total;
    2.0 * p * (1.0 - p)
}

struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Best (feature, threshold) over the candidate features; thresholds are
/// midpoints between adjacent distinct values. Ties resolve to the lowest
/// feature index, then the lowest threshold, so builds are reproducible.
fn best_split(
    x: &[Vec<f64>],
    y: &[bool],
    rows: &[usize],
    candidates: &[usize],
) -> Option<Split> {
    let total = rows.len() as f64;
    let attack_total = rows.iter().filter(|&&i| y[i]).count() as f64;
    let parent = gini(attack_total, total);
    let mut best: Option<Split> = None;
    for &feature in candidates {
        let mut order: Vec<usize> = rows.to_vec();
        order.sort_unstable_by(|&a, &b| x[a][feature].partial_cmp(&x[b][feature]).unwrap());
        let mut left_n = 0.0;
        let mut left_attack = 0.0;
        for w in 0..order.len() - 1 {
            let i = order[w];
            left_n += 1.0;
            if y[i] {
                left_attack += 1.0;
            }
            let v = x[i][feature];
            let next = x[order[w + 1]][feature];
            if next == v {
                continue;
            }
            let right_n = total - left_n;
            let weighted = (left_n * gini(left_attack, left_n)
                + right_n * gini(attack_total - left_attack, right_n))
                / total;
            let gain = parent - weighted;
            let threshold = v + (next - v) / 2.0;
            let better = match &best {
                None => gain > MIN_GAIN,
                Some(b) => gain > b.gain + MIN_GAIN,
            };
            if better {
                best = Some(Split {
                    feature,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}

/// Grow a tree over `rows`. When `rng` is given, each split considers a
/// fresh random subset of `mtry` features (forest mode); otherwise every
/// feature is a candidate.
pub fn build_tree(
    x: &[Vec<f64>],
    y: &[bool],
    rows: &[usize],
    max_depth: usize,
    mtry: Option<usize>,
    mut rng: Option<&mut ChaCha8Rng>,
) -> TreeParams {
    let mut nodes = Vec::new();
    grow(x, y, rows, 0, max_depth, mtry, &mut rng, &mut nodes);
    TreeParams { nodes }
}

#[allow(clippy::too_many_arguments)]
fn grow(
    x: &[Vec<f64>],
    y: &[bool],
    rows: &[usize],
    depth: usize,
    max_depth: usize,
    mtry: Option<usize>,
    rng: &mut Option<&mut ChaCha8Rng>,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let total = rows.len();
    let attack = rows.iter().filter(|&&i| y[i]).count();
    let make_leaf = |nodes: &mut Vec<TreeNode>| {
        let p = if total == 0 {
            0.0
        } else {
            attack as f64 / total as f64
        };
        nodes.push(TreeNode::Leaf {
            attack: 2 * attack > total,
            confidence: p.max(1.0 - p),
        });
        nodes.len() - 1
    };
    if depth >= max_depth || total < 2 || attack == 0 || attack == total {
        return make_leaf(nodes);
    }
    let d = x[0].len();
    let candidates: Vec<usize> = match (mtry, rng.as_deref_mut()) {
        (Some(m), Some(rng)) => {
            let mut all: Vec<usize> = (0..d).collect();
            all.shuffle(rng);
            let mut picked = all[..m.min(d)].to_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..d).collect(),
    };
    let Some(split) = best_split(x, y, rows, &candidates) else {
        return make_leaf(nodes);
    };
    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&i| x[i][split.feature] <= split.threshold);
    if left_rows.is_empty() || right_rows.is_empty() {
        return make_leaf(nodes);
    }
    let slot = nodes.len();
    nodes.push(TreeNode::Leaf {
        attack: false,
        confidence: 0.0,
    }); // placeholder
    let left = grow(x, y, &left_rows, depth + 1, max_depth, mtry, rng, nodes);
    let right = grow(x, y, &right_rows, depth + 1, max_depth, mtry, rng, nodes);
    nodes[slot] = TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left,
        right,
    };
    slot
}

pub fn fit(x: &[Vec<f64>], y: &[bool], max_depth: usize) -> TreeParams {
    let rows: Vec<usize> = (0..x.len()).collect();
    build_tree(x, y, &rows, max_depth, None, None)
}

pub fn predict(params: &TreeParams, x: &[f64]) -> (bool, f64) {
    let mut at = 0;
    loop {
        match &params.nodes[at] {
            TreeNode::Leaf { attack, confidence } => return (*attack, *confidence),
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                at = if x[*feature] <= *threshold { *left } else { *right };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_a_one_dimensional_step() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let y: Vec<bool> = (0..10).map(|i| i >= 5).collect();
        let params = fit(&x, &y, 4);
        for (row, &label) in x.iter().zip(&y) {
            assert_eq!(predict(&params, row).0, label);
        }
        // single split at the midpoint 4.5
        assert!(matches!(
            params.nodes.iter().find(|n| matches!(n, TreeNode::Split { .. })),
            Some(TreeNode::Split { feature: 0, threshold, .. }) if (*threshold - 4.5).abs() < 1e-12
        ));
    }

    #[test]
    fn pure_data_yields_a_single_leaf() {
        let x = vec![vec![1.0], vec![2.0], vec![3.0]];
        let y = vec![true, true, true];
        let params = fit(&x, &y, 4);
        assert_eq!(params.nodes.len(), 1);
        assert_eq!(predict(&params, &[9.0]), (true, 1.0));
    }
}
