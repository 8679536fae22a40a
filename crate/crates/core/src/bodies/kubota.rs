//! Cauchy–Kubota averages of shadow volumes.

use nalgebra::DMatrix;

use crate::error::{dim_err, Result};
use crate::grassmann::{ellipsoid_shadow_volume, haar_subspace, Subspace};
use crate::sampler::{mc_estimate, Estimate, SeededSampler};
use crate::special::{kappa, kubota_constant};

use super::hull::hull_volume_points;
use super::polytope::{hull_volume, projected_points, Polytope};

/// Convex body known through its shadows.
pub trait ConvexBody: Sync {
    fn ambient_dim(&self) -> usize;

    /// `vol_k(Pr_E K)` with `k = dim E`.
    fn shadow_volume(&self, e: &Subspace) -> f64;

    fn volume(&self) -> f64;
}

impl ConvexBody for Polytope {
    fn ambient_dim(&self) -> usize {
        Polytope::ambient_dim(self)
    }

    fn shadow_volume(&self, e: &Subspace) -> f64 {
        hull_volume_points(&projected_points(self, e))
    }

    fn volume(&self) -> f64 {
        hull_volume(self)
    }
}

/// Euclidean ball of radius `radius` centred at the origin of `R^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub n: usize,
    pub radius: f64,
}

impl ConvexBody for Ball {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn shadow_volume(&self, e: &Subspace) -> f64 {
        kappa(e.dim()) * self.radius.powi(e.dim() as i32)
    }

    fn volume(&self) -> f64 {
        kappa(self.n) * self.radius.powi(self.n as i32)
    }
}

/// Unit ball `D_L` of a subspace `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBall(pub Subspace);

impl ConvexBody for SubspaceBall {
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    fn shadow_volume(&self, e: &Subspace) -> f64 {
        let qt: DMatrix<f64> = e.basis().transpose();
        ellipsoid_shadow_volume(&qt, &self.0, e.dim())
    }

    fn volume(&self) -> f64 {
        let n = self.0.ambient_dim();
        if self.0.dim() == n {
            kappa(n)
        } else {
            0.0
        }
    }
}

/// `V_k(K) ~ c(n, k) * mean vol_k(Pr_E K)` over `samples` Haar-random
/// `k`-subspaces. `c(n, k)` makes the average exact on the unit ball.
/// `k = 0` and `k = n` are computed exactly.
pub fn kubota_estimate<B: ConvexBody + ?Sized>(
    body: &B,
    k: usize,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<Estimate> {
    let n = body.ambient_dim();
    if k > n {
        return Err(dim_err(format!("k = {k} exceeds ambient dimension {n}")));
    }
    if k == 0 {
        return Ok(Estimate::exact(1.0));
    }
    if k == n {
        return Ok(Estimate::exact(body.volume()));
    }
    let est = mc_estimate(samples, s, |s| {
        let e = haar_subspace(n, k, s).expect("0 < k < n");
        body.shadow_volume(&e)
    });
    Ok(est.scale(kubota_constant(n, k)))
}
