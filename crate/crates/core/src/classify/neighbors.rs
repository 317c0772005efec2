//! Distance-based kinds: k-nearest-neighbors and nearest centroid.

use serde::{Deserialize, Serialize};

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
}

pub fn fit_knn(x: &[Vec<f64>], y: &[bool], k: usize) -> KnnParams {
    KnnParams {
        k: k.min(x.len()),
        points: x.to_vec(),
        labels: y.to_vec(),
    }
}

/// An exact-match neighbor (distance zero) decides on its own; otherwise
/// the k nearest vote, ties going to the closest neighbor's label.
pub fn predict_knn(params: &KnnParams, x: &[f64]) -> (bool, f64) {
    let mut dists: Vec<(f64, usize)> = params
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (squared_distance(p, x), i))
        .collect();
    if let Some(&(_, i)) = dists.iter().find(|(d, _)| *d == 0.0) {
        return (params.labels[i], 1.0);
    }
    dists.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let k = params.k.max(1).min(dists.len());
    let attack_votes = dists[..k].iter().filter(|&&(_, i)| params.labels[i]).count();
    let normal_votes = k - attack_votes;
    let attack = match attack_votes.cmp(&normal_votes) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => params.labels[dists[0].1],
    };
    (attack, attack_votes.max(normal_votes) as f64 / k as f64)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentroidParams {
    pub normal: Option<Vec<f64>>,
    pub attack: Option<Vec<f64>>,
}

fn centroid(rows: Vec<&Vec<f64>>) -> Option<Vec<f64>> {
    if rows.is_empty() {
        return None;
    }
    let d = rows[0].len();
    let mut c = vec![0.0; d];
    for row in &rows {
        for (s, v) in c.iter_mut().zip(row.iter()) {
            *s += v;
        }
    }
    let n = rows.len() as f64;
    for s in &mut c {
        *s /= n;
    }
    Some(c)
}

pub fn fit_centroid(x: &[Vec<f64>], y: &[bool]) -> CentroidParams {
    CentroidParams {
        normal: centroid(x.iter().zip(y).filter(|(_, &a)| !a).map(|(r, _)| r).collect()),
        attack: centroid(x.iter().zip(y).filter(|(_, &a)| a).map(|(r, _)| r).collect()),
    }
}

pub fn predict_centroid(params: &CentroidParams, x: &[f64]) -> (bool, f64) {
    match (&params.normal, &params.attack) {
        (Some(n), Some(a)) => {
            let dn = squared_distance(n, x).sqrt();
            let da = squared_distance(a, x).sqrt();
            let attack = da < dn;
            let conf = if dn + da > 0.0 {
                dn.max(da) / (dn + da)
            } else {
                0.5
            };
            (attack, conf)
        }
        (Some(_), None) => (false, 1.0),
        (None, Some(_)) => (true, 1.0),
        (None, None) => (false, 0.5),
    }
}
