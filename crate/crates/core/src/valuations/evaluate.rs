//! Evaluation of valuation expressions on polytopes and subspace balls.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bodies::hull::hull_volume_points;
use crate::bodies::{kubota_estimate, ConvexBody, Polytope, SubspaceBall};
use crate::error::{dim_err, GeoError, Result};
use crate::grassmann::{ellipsoid_shadow_volume, haar_subspace, Subspace};
use crate::sampler::{mc_estimate, Estimate, SeededSampler};
use crate::special::{binomial, kappa, kubota_constant};
use crate::transforms::GFunction;

use super::expr::{BodySpec, ValuationExpr};
use super::lambda::lambda_apply;

/// Monte-Carlo budget for evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub samples: usize,
}

impl Budget {
    pub fn new(samples: usize) -> Self {
        Self { samples }
    }

    pub(crate) fn require(&self) -> Result<usize> {
        if self.samples == 0 {
            Err(GeoError::Invalid("Monte-Carlo budget of zero samples".into()))
        } else {
            Ok(self.samples)
        }
    }
}

/// `vol((Pr_{F_1} + Pr_{F_2}) K)` with the image in the external sum `F_1 + F_2`.
pub fn product_projection(f1: &Subspace, f2: &Subspace, k: &Polytope) -> Result<f64> {
    let n = k.ambient_dim();
    if f1.ambient_dim() != n || f2.ambient_dim() != n {
        return Err(dim_err("subspaces and polytope live in different spaces"));
    }
    let points: Vec<Vec<f64>> = k
        .vertices()
        .iter()
        .map(|v| {
            let mut p = f1.coordinates(v);
            p.extend(f2.coordinates(v));
            p
        })
        .collect();
    Ok(hull_volume_points(&points))
}

/// [`product_projection`] for `D_L`: the image is an ellipsoid.
pub fn product_projection_ball(f1: &Subspace, f2: &Subspace, l: &Subspace) -> Result<f64> {
    let n = l.ambient_dim();
    if f1.ambient_dim() != n || f2.ambient_dim() != n {
        return Err(dim_err("subspaces live in different spaces"));
    }
    let a = stacked_projection(f1, f2);
    Ok(ellipsoid_shadow_volume(&a, l, f1.dim() + f2.dim()))
}

/// `[Q_1^T; Q_2^T]`, the matrix of `Pr_{F_1} + Pr_{F_2}` in basis coordinates.
pub(crate) fn stacked_projection(f1: &Subspace, f2: &Subspace) -> DMatrix<f64> {
    let n = f1.ambient_dim();
    let (a, b) = (f1.dim(), f2.dim());
    let mut m = DMatrix::zeros(a + b, n);
    m.rows_mut(0, a).copy_from(&f1.basis().transpose());
    m.rows_mut(a, b).copy_from(&f2.basis().transpose());
    m
}

fn shadow(body: &BodySpec, e: &Subspace) -> f64 {
    match body {
        BodySpec::Polytope(p) => p.shadow_volume(e),
        BodySpec::Ball { subspace } => SubspaceBall(subspace.clone()).shadow_volume(e),
    }
}

fn pair_projection(body: &BodySpec, f1: &Subspace, f2: &Subspace) -> Result<f64> {
    match body {
        BodySpec::Polytope(p) => product_projection(f1, f2, p),
        BodySpec::Ball { subspace } => product_projection_ball(f1, f2, subspace),
    }
}

/// A factor written as `phi(K) = E[w(F) vol(Pr_F K)]` over a measure on subspaces.
#[derive(Clone)]
pub(crate) enum Crofton {
    /// `phi = c` (degree 0).
    Scalar(f64),
    /// A single subspace with weight one.
    Fixed(Subspace),
    /// Haar measure on `Gr_dim` with constant weight.
    Haar { n: usize, dim: usize, weight: f64 },
    /// Haar measure on `Gr_dim` weighted by `f`.
    Weighted { n: usize, dim: usize, f: GFunction },
}

impl Crofton {
    pub(crate) fn of(e: &ValuationExpr, n: usize) -> Result<Crofton> {
        match e {
            ValuationExpr::IntrinsicVolume { k } => Ok(match *k {
                0 => Crofton::Scalar(1.0),
                k if k == n => Crofton::Fixed(Subspace::full(n)),
                k => Crofton::Haar {
                    n,
                    dim: k,
                    weight: kubota_constant(n, k),
                },
            }),
            ValuationExpr::ProjectionVal { subspace } => Ok(if subspace.dim() == 0 {
                Crofton::Scalar(1.0)
            } else {
                Crofton::Fixed(subspace.clone())
            }),
            ValuationExpr::CroftonVal { f, i } => Ok(match *i {
                0 => Crofton::Scalar(f.eval(&Subspace::zero(n))),
                i if i == n => {
                    let full = Subspace::full(n);
                    Crofton::Haar {
                        n,
                        dim: n,
                        weight: f.eval(&full),
                    }
                }
                i => Crofton::Weighted { n, dim: i, f: f.clone() },
            }),
            _ => Err(GeoError::Unsupported(
                "product factors must be intrinsic volumes, projection or Crofton valuations".into(),
            )),
        }
    }

    pub(crate) fn draw(&self, s: &mut SeededSampler) -> (Subspace, f64) {
        match self {
            Crofton::Scalar(_) => unreachable!("scalars are handled before sampling"),
            Crofton::Fixed(f) => (f.clone(), 1.0),
            Crofton::Haar { n, dim, weight } => {
                if dim == n {
                    (Subspace::full(*n), *weight)
                } else {
                    (haar_subspace(*n, *dim, s).expect("dim < n"), *weight)
                }
            }
            Crofton::Weighted { n, dim, f } => {
                let e = haar_subspace(*n, *dim, s).expect("dim < n");
                let w = f.eval(&e);
                (e, w)
            }
        }
    }

    fn is_random(&self) -> bool {
        matches!(self, Crofton::Haar { .. } | Crofton::Weighted { .. })
    }
}

/// Value of `e` on `body`, with a standard error for Monte-Carlo parts.
pub fn evaluate(
    e: &ValuationExpr,
    body: &BodySpec,
    budget: Budget,
    s: &mut SeededSampler,
) -> Result<Estimate> {
    let n = body.ambient_dim();
    e.validate(n)?;
    match e {
        ValuationExpr::IntrinsicVolume { k } => match body {
            BodySpec::Polytope(p) => kubota_estimate(p, *k, budget.require()?, s),
            BodySpec::Ball { subspace } => {
                let l = subspace.dim();
                let v = if *k > l {
                    0.0
                } else {
                    binomial(l, *k) * kappa(l) / kappa(l - *k)
                };
                Ok(Estimate::exact(v))
            }
        },
        ValuationExpr::ProjectionVal { subspace } => Ok(Estimate::exact(shadow(body, subspace))),
        ValuationExpr::CroftonVal { f, i } => {
            if *i == 0 || *i == n {
                let full = if *i == 0 { Subspace::zero(n) } else { Subspace::full(n) };
                return Ok(Estimate::exact(f.eval(&full) * shadow(body, &full)));
            }
            Ok(mc_estimate(budget.require()?, s, |s| {
                let g = haar_subspace(n, *i, s).expect("0 < i < n");
                f.eval(&g) * shadow(body, &g)
            }))
        }
        ValuationExpr::ProductProj { first, second } => {
            Ok(Estimate::exact(pair_projection(body, first, second)?))
        }
        ValuationExpr::Product { left, right } => {
            let a = Crofton::of(left, n)?;
            let b = Crofton::of(right, n)?;
            if let Crofton::Scalar(c) = a {
                return Ok(evaluate(right, body, budget, s)?.scale(c));
            }
            if let Crofton::Scalar(c) = b {
                return Ok(evaluate(left, body, budget, s)?.scale(c));
            }
            if !a.is_random() && !b.is_random() {
                let (f1, _) = a.draw(s);
                let (f2, _) = b.draw(s);
                return Ok(Estimate::exact(pair_projection(body, &f1, &f2)?));
            }
            Ok(mc_estimate(budget.require()?, s, |s| {
                let (f1, w1) = a.draw(s);
                let (f2, w2) = b.draw(s);
                w1 * w2 * pair_projection(body, &f1, &f2).expect("validated dimensions")
            }))
        }
        ValuationExpr::Lambda { arg } => match body {
            BodySpec::Polytope(p) => {
                let grid = super::lambda::default_lambda_grid(p, arg.degree()?);
                Ok(lambda_apply(arg, p, &grid, budget, s)?.value)
            }
            BodySpec::Ball { .. } => Err(GeoError::Unsupported(
                "Lambda is evaluated on polytopes only".into(),
            )),
        },
    }
}

/// Klain function `L -> phi(D_L)` on `Gr_k(R^n)`, `k = deg(e)`.
///
/// Closed forms for intrinsic volumes, projection valuations and products of
/// projections; otherwise the evaluation uses `budget` samples from a fixed
/// `seed`, so the function is deterministic.
pub fn klain_function(e: &ValuationExpr, n: usize, budget: Budget, seed: u64) -> Result<GFunction> {
    let k = e.validate(n)?;
    if let ValuationExpr::IntrinsicVolume { .. } = e {
        let v = kappa(k);
        return Ok(GFunction::constant(n, k, v));
    }
    let expr = e.clone();
    Ok(GFunction::custom(n, k, move |l| {
        let body = BodySpec::Ball { subspace: l.clone() };
        evaluate(&expr, &body, budget, &mut SeededSampler::new(seed, 0))
            .map(|v| v.mean)
            .unwrap_or(f64::NAN)
    }))
}
