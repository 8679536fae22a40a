//! Minimum-norm point of a convex hull (Wolfe's algorithm), used for distances
//! to polytopes given by vertices.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeoError, Result};

use super::hull::dot;

const MAJOR_CAP: usize = 10_000;
const MINOR_CAP: usize = 1_000;
const WEIGHT_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct NearestPoint {
    pub point: Vec<f64>,
    pub distance: f64,
    /// Convex weights over the input vertices.
    pub weights: Vec<f64>,
}

/// Solves `min |sum a_i p_i|` subject to `sum a_i = 1` over the corral.
fn affine_minimizer(p: &[Vec<f64>], corral: &[usize]) -> Vec<f64> {
    let s = corral.len();
    let mut kkt = DMatrix::zeros(s + 1, s + 1);
    for a in 0..s {
        for b in 0..s {
            kkt[(a, b)] = dot(&p[corral[a]], &p[corral[b]]);
        }
        kkt[(a, s)] = 1.0;
        kkt[(s, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(s + 1);
    rhs[s] = 1.0;
    let sol = kkt
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| {
            let svd = kkt.svd(true, true);
            svd.solve(&rhs, 1e-13).unwrap_or_else(|_| DVector::zeros(s + 1))
        });
    sol.rows(0, s).iter().copied().collect()
}

/// Point of `conv(points)` nearest to `x`, within `1e-9` relative to the
/// point-set scale. Errors with [`GeoError::IterationCap`] if it fails to converge.
pub fn nearest_point(points: &[Vec<f64>], x: &[f64]) -> Result<NearestPoint> {
    if points.is_empty() {
        return Err(GeoError::Invalid("empty vertex set".into()));
    }
    let p: Vec<Vec<f64>> = points
        .iter()
        .map(|v| v.iter().zip(x).map(|(a, b)| a - b).collect())
        .collect();
    let scale2 = p.iter().map(|v| dot(v, v)).fold(0.0, f64::max).max(1e-300);
    let start = (0..p.len())
        .min_by(|&a, &b| dot(&p[a], &p[a]).total_cmp(&dot(&p[b], &p[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut w = vec![1.0];
    let mut y = p[start].clone();

    let mut converged = false;
    for _ in 0..MAJOR_CAP {
        let yy = dot(&y, &y);
        if yy <= 1e-26 * scale2 {
            converged = true;
            break;
        }
        let (j, yp) = (0..p.len())
            .map(|i| (i, dot(&y, &p[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if yy - yp <= 1e-13 * scale2 || corral.contains(&j) {
            converged = true;
            break;
        }
        corral.push(j);
        w.push(0.0);

        let mut minor = 0;
        loop {
            minor += 1;
            if minor > MINOR_CAP {
                return Err(GeoError::IterationCap {
                    cap: MINOR_CAP,
                    context: "nearest_point minor cycle",
                });
            }
            let alpha = affine_minimizer(&p, &corral);
            if alpha.iter().all(|&a| a > WEIGHT_TOL) {
                w = alpha;
                break;
            }
            let mut theta = f64::INFINITY;
            let mut drop = 0;
            for k in 0..corral.len() {
                if alpha[k] <= WEIGHT_TOL {
                    let denom = w[k] - alpha[k];
                    let t = if denom > 0.0 { w[k] / denom } else { 0.0 };
                    if t < theta {
                        theta = t;
                        drop = k;
                    }
                }
            }
            let theta = theta.min(1.0);
            for k in 0..corral.len() {
                w[k] = theta * alpha[k] + (1.0 - theta) * w[k];
            }
            w[drop] = 0.0;
            let mut k = 0;
            while k < corral.len() {
                if w[k] <= WEIGHT_TOL {
                    corral.remove(k);
                    w.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= total);
            if corral.len() == 1 {
                w = vec![1.0];
                break;
            }
        }
        y = vec![0.0; x.len()];
        for (k, &c) in corral.iter().enumerate() {
            y.iter_mut().zip(&p[c]).for_each(|(a, b)| *a += w[k] * b);
        }
    }
    if !converged {
        return Err(GeoError::IterationCap {
            cap: MAJOR_CAP,
            context: "nearest_point",
        });
    }
    let mut weights = vec![0.0; points.len()];
    for (k, &c) in corral.iter().enumerate() {
        weights[c] = w[k];
    }
    let distance = dot(&y, &y).sqrt();
    Ok(NearestPoint {
        point: y.iter().zip(x).map(|(a, b)| a + b).collect(),
        distance,
        weights,
    })
}
