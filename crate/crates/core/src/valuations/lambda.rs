//! The mixing operator `(Lambda phi)(K) = d/d eps phi(K + eps D)` at `eps = 0`,
//! by polynomial fits over a grid of `eps` values.

use serde::{Deserialize, Serialize};

use crate::bodies::hull::{hull_volume_points, polygon_perimeter};
use crate::bodies::polytope::projected_points;
use crate::bodies::steiner::sample_distances;
use crate::bodies::Polytope;
use crate::error::{GeoError, Result};
use crate::grassmann::Subspace;
use crate::sampler::{mc_estimate_vec, Estimate, SeededSampler};
use crate::special::{chebyshev_grid, factorial, polyfit};

use super::evaluate::{Budget, Crofton};
use super::expr::ValuationExpr;

/// Relative fit residual above which [`lambda_apply`] fails.
pub const LAMBDA_RESIDUAL_LIMIT: f64 = 2e-2;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaResult {
    pub value: Estimate,
    /// Number of `Lambda` applications (derivative order).
    pub order: usize,
    /// Relative RMS residual of the polynomial fit.
    pub residual: f64,
    pub grid: Vec<f64>,
}

/// Chebyshev grid on `[0, diam K]` with `2 deg + 3` points.
pub fn default_lambda_grid(k: &Polytope, degree: usize) -> Vec<f64> {
    let diam = k.diameter();
    chebyshev_grid(0.0, if diam > 0.0 { diam } else { 1.0 }, 2 * degree + 3)
}

/// Exact coefficients of `vol_m(P + eps D)` for `P` in `R^m`, `m <= 2`.
fn planar_steiner(points: &[Vec<f64>], m: usize) -> Option<Vec<f64>> {
    match m {
        0 => Some(vec![1.0]),
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            Some(vec![hi - lo, 2.0])
        }
        2 => Some(vec![
            hull_volume_points(points),
            polygon_perimeter(points),
            std::f64::consts::PI,
        ]),
        _ => None,
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// `Lambda^m e` on `K`, where `m = 1 +` the number of `Lambda` wrappers around
/// the base valuation inside `e`: the `m`-th derivative at zero of the degree-`deg`
/// polynomial fitted to `eps -> phi(K + eps D)` over `grid`.
///
/// Supported base valuations: `IntrinsicVolume`, `ProjectionVal` and
/// `CroftonVal`. Shadows of dimension at most 2 are grown exactly; full-dimensional
/// ones use Monte-Carlo parallel volumes.
pub fn lambda_apply(
    e: &ValuationExpr,
    k: &Polytope,
    grid: &[f64],
    budget: Budget,
    s: &mut SeededSampler,
) -> Result<LambdaResult> {
    let n = k.ambient_dim();
    let mut order = 1;
    let mut base = e;
    while let ValuationExpr::Lambda { arg } = base {
        order += 1;
        base = arg;
    }
    let deg = base.validate(n)?;
    if deg < order {
        return Err(GeoError::Invalid(format!(
            "Lambda^{order} of a degree-{deg} valuation"
        )));
    }
    let mut distinct = grid.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < deg + 1 || grid.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(GeoError::Invalid(format!(
            "need at least {} distinct nonnegative grid points",
            deg + 1
        )));
    }
    // Least-squares rows for the mean values; fitted once on placeholder data
    // to obtain the pseudo-inverse, which does not depend on the data.
    let zeros = vec![0.0; grid.len()];
    let pinv = polyfit(grid, &zeros, deg)?.pinv;
    let functional: Vec<f64> = (0..grid.len())
        .map(|g| factorial(order) * pinv[(order, g)])
        .collect();
    let g = grid.len();

    let crofton = Crofton::of(base, n)?;
    let (means, value) = match &crofton {
        Crofton::Scalar(_) => unreachable!("degree >= 1"),
        Crofton::Fixed(f) if f.dim() <= 2 => {
            let c = planar_steiner(&projected_points(k, f), f.dim()).expect("dim <= 2");
            let ys: Vec<f64> = grid.iter().map(|&x| poly_eval(&c, x)).collect();
            let v = functional.iter().zip(&ys).map(|(a, y)| a * y).sum();
            (ys, Estimate::exact(v))
        }
        Crofton::Fixed(f) => parallel_volume_functional(k, f, 1.0, grid, &functional, budget, s)?,
        Crofton::Haar { dim, weight, .. } if *dim == n => {
            parallel_volume_functional(k, &Subspace::full(n), *weight, grid, &functional, budget, s)?
        }
        Crofton::Haar { dim, .. } | Crofton::Weighted { dim, .. } => {
            if *dim > 2 {
                return Err(GeoError::Unsupported(format!(
                    "Lambda of a Crofton average over Gr_{dim} with {dim} < n is not implemented"
                )));
            }
            let est = mc_estimate_vec(budget.require()?, g + 1, s, |s, out| {
                let (f, w) = crofton.draw(s);
                let c = planar_steiner(&projected_points(k, &f), f.dim()).expect("dim <= 2");
                let mut z = 0.0;
                for (j, &x) in grid.iter().enumerate() {
                    out[j] = w * poly_eval(&c, x);
                    z += functional[j] * out[j];
                }
                out[g] = z;
            });
            (est[..g].iter().map(|e| e.mean).collect(), est[g])
        }
    };
    let fit = polyfit(grid, &means, deg)?;
    if fit.relative_residual > LAMBDA_RESIDUAL_LIMIT {
        return Err(GeoError::PolynomialFit {
            residual: fit.relative_residual,
            threshold: LAMBDA_RESIDUAL_LIMIT,
        });
    }
    Ok(LambdaResult {
        value,
        order,
        residual: fit.relative_residual,
        grid: grid.to_vec(),
    })
}

/// `weight * vol(Pr_F K + eps D_F)` over the grid by Monte-Carlo membership,
/// and the linear functional `sum_g a_g y_g` of those values.
fn parallel_volume_functional(
    k: &Polytope,
    f: &Subspace,
    weight: f64,
    grid: &[f64],
    functional: &[f64],
    budget: Budget,
    s: &mut SeededSampler,
) -> Result<(Vec<f64>, Estimate)> {
    let shadow = Polytope::new(f.dim(), projected_points(k, f))?;
    let eps_max = grid.iter().copied().fold(0.0, f64::max);
    let ds = sample_distances(&shadow, eps_max, budget.require()?, s)?;
    let ys = grid
        .iter()
        .map(|&x| weight * ds.parallel_volume(x).mean)
        .collect();
    let value = ds
        .integral(|d| {
            grid.iter()
                .zip(functional)
                .filter(|(x, _)| d <= **x)
                .map(|(_, a)| a)
                .sum()
        })
        .scale(weight);
    Ok((ys, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{make_cube, make_simplex};
    use crate::grassmann::haar_subspace;
    use crate::special::kubota_constant;

    #[test]
    fn projection_plane_is_perimeter() {
        let k = make_simplex(3);
        let f = Subspace::coordinate(3, &[0, 1]).unwrap();
        let e = ValuationExpr::projection(f);
        let grid = default_lambda_grid(&k, 2);
        let r = lambda_apply(&e, &k, &grid, Budget::new(1), &mut SeededSampler::new(1, 0)).unwrap();
        assert!((r.value.mean - (2.0 + 2f64.sqrt())).abs() < 1e-10);
        let rr = lambda_apply(&ValuationExpr::lambda(e), &k, &grid, Budget::new(1), &mut SeededSampler::new(1, 0)).unwrap();
        assert_eq!(rr.order, 2);
        assert!((rr.value.mean - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn mean_width_lambda_is_constant() {
        // Lambda V_1 = c V_0: the same for every body.
        let e = ValuationExpr::intrinsic(1);
        let mut vals = Vec::new();
        for k in [make_cube(3, 1.0), make_simplex(3)] {
            let grid = default_lambda_grid(&k, 1);
            let r = lambda_apply(&e, &k, &grid, Budget::new(200), &mut SeededSampler::new(2, 0)).unwrap();
            vals.push(r.value.mean);
        }
        let want = kubota_constant(3, 1) * 2.0;
        for v in vals {
            assert!((v - want).abs() < 1e-9, "{v} vs {want}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let k = make_cube(3, 1.0);
        let mut s = SeededSampler::new(3, 0);
        let grid = default_lambda_grid(&k, 3);
        assert!(lambda_apply(&ValuationExpr::intrinsic(0), &k, &grid, Budget::new(10), &mut s).is_err());
        assert!(lambda_apply(&ValuationExpr::intrinsic(2), &k, &[0.0, 1.0], Budget::new(10), &mut s).is_err());
        let l = haar_subspace(3, 1, &mut s).unwrap();
        let pp = ValuationExpr::ProductProj { first: l.clone(), second: l };
        assert!(matches!(lambda_apply(&pp, &k, &grid, Budget::new(10), &mut s), Err(GeoError::Unsupported(_))));
    }
}
