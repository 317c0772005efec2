//! Gaussian naive Bayes.

use serde::{Deserialize, Serialize};

const VAR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassStats {
    pub prior_ln: f64,
    pub means: Vec<f64>,
    pub vars: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NbParams {
    pub normal: Option<ClassStats>,
    pub attack: Option<ClassStats>,
}

fn class_stats(rows: &[&Vec<f64>], total: usize) -> ClassStats {
    let d = rows[0].len();
    let n = rows.len() as f64;
    let mut means = vec![0.0; d];
    for row in rows {
        for (m, v) in means.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut vars = vec![0.0; d];
    for row in rows {
        for ((s, v), m) in vars.iter_mut().zip(row.iter()).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    for s in &mut vars {
        *s = (*s / n).max(VAR_FLOOR);
    }
    ClassStats {
        prior_ln: (rows.len() as f64 / total as f64).ln(),
        means,
        vars,
    }
}

pub fn fit(x: &[Vec<f64>], y: &[bool]) -> NbParams {
    let attacks: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, &a)| a).map(|(r, _)| r).collect();
    let normals: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, &a)| !a).map(|(r, _)| r).collect();
    NbParams {
        normal: (!normals.is_empty()).then(|| class_stats(&normals, x.len())),
        attack: (!attacks.is_empty()).then(|| class_stats(&attacks, x.len())),
    }
}

fn log_likelihood(stats: &ClassStats, x: &[f64]) -> f64 {
    let mut ll = stats.prior_ln;
    for ((v, m), s2) in x.iter().zip(&stats.means).zip(&stats.vars) {
        ll += -0.5 * (std::f64::consts::TAU * s2).ln() - (v - m) * (v - m) / (2.0 * s2);
    }
    ll
}

/// Returns (is_attack, confidence of the predicted class).
pub fn predict(params: &NbParams, x: &[f64]) -> (bool, f64) {
    match (&params.normal, &params.attack) {
        (Some(n), Some(a)) => {
            let ln = log_likelihood(n, x);
            let la = log_likelihood(a, x);
            let attack = la > ln;
            // posterior of the winning class via the two-class logistic form
            let conf = 1.0 / (1.0 + (-(la - ln).abs()).exp());
            (attack, conf)
        }
        (Some(_), None) => (false, 1.0),
        (None, Some(_)) => (true, 1.0),
        (None, None) => (false, 0.5),
    }
}
