//! Proportionality of two valuations across a set of bodies, and single-scalar
//! fits between sampled functions.

use serde::{Deserialize, Serialize};

use crate::bodies::Polytope;
use crate::error::{dim_err, Result};
use crate::sampler::{par_map_streams, Estimate, SeededSampler};

use super::evaluate::{evaluate, Budget};
use super::expr::{BodySpec, ValuationExpr};

/// Values below this (relative to the largest) are excluded from ratios.
const ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProportionalityReport {
    pub values_a: Vec<Estimate>,
    pub values_b: Vec<Estimate>,
    /// `a / b` per body; `None` where `b` vanishes.
    pub ratios: Vec<Option<f64>>,
    pub mean_ratio: f64,
    /// `(max - min) / |mean|` over the defined ratios.
    pub spread: f64,
    pub tolerance: f64,
    pub proportional: bool,
    pub warnings: Vec<String>,
}

/// Evaluates `a` and `b` on every body (bodies in parallel, one sub-stream
/// each, shared by `a` and `b`) and compares their ratios.
pub fn proportionality_check(
    a: &ValuationExpr,
    b: &ValuationExpr,
    bodies: &[Polytope],
    budget: Budget,
    tolerance: f64,
    s: &mut SeededSampler,
) -> Result<ProportionalityReport> {
    if a.degree()? != b.degree()? {
        return Err(dim_err(format!(
            "degrees differ: {} vs {}",
            a.degree()?,
            b.degree()?
        )));
    }
    let results = par_map_streams(bodies.len(), s, |j, s| {
        let body = BodySpec::Polytope(bodies[j].clone());
        let key = s.fork_key();
        let va = evaluate(a, &body, budget, &mut SeededSampler::new(key, 0))?;
        let vb = evaluate(b, &body, budget, &mut SeededSampler::new(key, 0))?;
        Ok((va, vb))
    });
    let mut values_a = Vec::new();
    let mut values_b = Vec::new();
    for r in results {
        let (va, vb): (Estimate, Estimate) = r?;
        values_a.push(va);
        values_b.push(vb);
    }
    let scale = values_b.iter().map(|v| v.mean.abs()).fold(0.0, f64::max);
    let mut warnings = Vec::new();
    let ratios: Vec<Option<f64>> = values_a
        .iter()
        .zip(&values_b)
        .enumerate()
        .map(|(j, (va, vb))| {
            if vb.mean.abs() <= ZERO_TOL * scale.max(f64::MIN_POSITIVE) {
                warnings.push(format!("body {j}: reference valuation vanishes, excluded"));
                None
            } else {
                Some(va.mean / vb.mean)
            }
        })
        .collect();
    let defined: Vec<f64> = ratios.iter().flatten().copied().collect();
    let (mean_ratio, spread) = ratio_spread(&defined);
    Ok(ProportionalityReport {
        values_a,
        values_b,
        ratios,
        mean_ratio,
        spread,
        tolerance,
        proportional: !defined.is_empty() && spread <= tolerance,
        warnings,
    })
}

/// Mean and `(max - min) / |mean|` of a list of ratios.
pub fn ratio_spread(ratios: &[f64]) -> (f64, f64) {
    if ratios.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    (mean, (max - min) / mean.abs())
}

/// Least-squares scalar `c` with `a ~ c b`, and the relative residual
/// `|a - c b| / |a|` (Euclidean norms).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarFit {
    pub scalar: f64,
    pub residual: f64,
}

pub fn fit_scalar(a: &[f64], b: &[f64]) -> ScalarFit {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let bb: f64 = b.iter().map(|y| y * y).sum();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let c = if bb > 0.0 { ab / bb } else { 0.0 };
    let r: f64 = a.iter().zip(b).map(|(x, y)| (x - c * y).powi(2)).sum();
    ScalarFit {
        scalar: c,
        residual: if aa > 0.0 { (r / aa).sqrt() } else { r.sqrt() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{make_cube, make_simplex};

    #[test]
    fn identical_valuations() {
        let bodies = vec![make_cube(3, 1.0), make_simplex(3)];
        let e = ValuationExpr::intrinsic(2);
        let r = proportionality_check(&e, &e, &bodies, Budget::new(500), 0.03, &mut SeededSampler::new(1, 0)).unwrap();
        for q in r.ratios.iter().flatten() {
            assert!((q - 1.0).abs() < 1e-12);
        }
        assert!(r.proportional);
    }

    #[test]
    fn degree_mismatch() {
        let r = proportionality_check(
            &ValuationExpr::intrinsic(1),
            &ValuationExpr::intrinsic(2),
            &[make_cube(3, 1.0)],
            Budget::new(10),
            0.03,
            &mut SeededSampler::new(2, 0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn vanishing_reference_is_excluded() {
        let flat = Polytope::new(3, vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let r = proportionality_check(
            &ValuationExpr::intrinsic(3),
            &ValuationExpr::intrinsic(3),
            &[make_cube(3, 1.0), flat],
            Budget::new(10),
            0.03,
            &mut SeededSampler::new(3, 0),
        )
        .unwrap();
        assert_eq!(r.ratios[1], None);
        assert_eq!(r.warnings.len(), 1);
        assert!(r.proportional);
    }

    #[test]
    fn scalar_fit() {
        let f = fit_scalar(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]);
        assert!((f.scalar - 2.0).abs() < 1e-14 && f.residual < 1e-14);
    }
}
