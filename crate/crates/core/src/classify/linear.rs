//! Linear decision rules: logistic regression, perceptron, hinge-loss SVM
//! and ridge-regularized least squares. All four share the same parameter
//! shape; they differ only in how the weights are trained.
//!
//! Prediction is `attack iff w·x + b > 0`; the reported confidence is the
//! logistic squash of the absolute margin, which is monotone in each
//! kind's internal score.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearParams {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearParams {
    pub fn margin(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }
}

pub fn predict(params: &LinearParams, x: &[f64]) -> (bool, f64) {
    let z = params.margin(x);
    (z > 0.0, 1.0 / (1.0 + (-z.abs()).exp()))
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Full-batch gradient descent on the regularized log loss.
pub fn fit_logistic(x: &[Vec<f64>], y: &[bool]) -> LinearParams {
    const ITERS: usize = 400;
    const LR: f64 = 1.0;
    const L2: f64 = 1e-4;
    let n = x.len() as f64;
    let d = x[0].len();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    for _ in 0..ITERS {
        let mut gw = vec![0.0; d];
        let mut gb = 0.0;
        for (row, &label) in x.iter().zip(y) {
            let target = if label { 1.0 } else { 0.0 };
            let err = sigmoid(row.iter().zip(&w).map(|(v, wi)| v * wi).sum::<f64>() + b) - target;
            for (g, v) in gw.iter_mut().zip(row) {
                *g += err * v;
            }
            gb += err;
        }
        for (wi, g) in w.iter_mut().zip(&gw) {
            *wi -= LR * (g / n + L2 * *wi);
        }
        b -= LR * gb / n;
    }
    LinearParams { weights: w, bias: b }
}

/// Classic mistake-driven updates over seeded shuffles of the data.
pub fn fit_perceptron(x: &[Vec<f64>], y: &[bool], seed: u64) -> LinearParams {
    const EPOCHS: usize = 50;
    let d = x[0].len();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..x.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..EPOCHS {
        order.shuffle(&mut rng);
        let mut mistakes = 0usize;
        for &i in &order {
            let target = if y[i] { 1.0 } else { -1.0 };
            let z = x[i].iter().zip(&w).map(|(v, wi)| v * wi).sum::<f64>() + b;
            if target * z <= 0.0 {
                for (wi, v) in w.iter_mut().zip(&x[i]) {
                    *wi += target * v;
                }
                b += target;
                mistakes += 1;
            }
        }
        if mistakes == 0 {
            break;
        }
    }
    LinearParams { weights: w, bias: b }
}

/// Full-batch subgradient descent on the hinge loss with L2 regularization.
pub fn fit_svm(x: &[Vec<f64>], y: &[bool]) -> LinearParams {
    const ITERS: usize = 400;
    const LAMBDA: f64 = 1e-3;
    let n = x.len() as f64;
    let d = x[0].len();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    for t in 0..ITERS {
        let lr = 0.5 / (1.0 + 0.01 * t as f64);
        let mut gw: Vec<f64> = w.iter().map(|wi| LAMBDA * wi).collect();
        let mut gb = 0.0;
        for (row, &label) in x.iter().zip(y) {
            let target = if label { 1.0 } else { -1.0 };
            let z = row.iter().zip(&w).map(|(v, wi)| v * wi).sum::<f64>() + b;
            if target * z < 1.0 {
                for (g, v) in gw.iter_mut().zip(row) {
                    *g -= target * v / n;
                }
                gb -= target / n;
            }
        }
        for (wi, g) in w.iter_mut().zip(&gw) {
            *wi -= lr * g;
        }
        b -= lr * gb;
    }
    LinearParams { weights: w, bias: b }
}

/// Closed-form ridge regression on ±1 targets, solved by Gaussian
/// elimination on the (d+1)-dimensional normal equations; the intercept
/// is not regularized.
pub fn fit_ridge(x: &[Vec<f64>], y: &[bool]) -> LinearParams {
    const LAMBDA: f64 = 1e-3;
    let n = x.len() as f64;
    let d = x[0].len();
    let dim = d + 1;
    // a = XtX/n + lambda*I (intercept column last, unregularized), rhs = Xty/n
    let mut a = vec![vec![0.0; dim]; dim];
    let mut rhs = vec![0.0; dim];
    for (row, &label) in x.iter().zip(y) {
        let target = if label { 1.0 } else { -1.0 };
        for i in 0..dim {
            let xi = if i < d { row[i] } else { 1.0 };
            rhs[i] += xi * target / n;
            for j in 0..dim {
                let xj = if j < d { row[j] } else { 1.0 };
                a[i][j] += xi * xj / n;
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate().take(d) {
        row[i] += LAMBDA;
    }
    let beta = solve(a, rhs);
    LinearParams {
        bias: beta[d],
        weights: beta[..d].to_vec(),
    }
}

/// Gaussian elimination with partial pivoting; the ridge system is
/// positive definite so a vanishing pivot cannot occur, but the guard
/// keeps a degenerate input from producing NaNs.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        if diag.abs() < 1e-12 {
            continue;
        }
        for row in col + 1..n {
            let factor = a[row][col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = if a[col][col].abs() < 1e-12 {
            0.0
        } else {
            acc / a[col][col]
        };
    }
    x
}
