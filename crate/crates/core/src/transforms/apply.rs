//! Monte-Carlo Radon and cosine transforms of functions on Grassmannians.

use crate::error::{dim_err, Result};
use crate::grassmann::{cos_angle, haar_subspace, sample_containing, sample_within, Subspace};
use crate::sampler::{mc_estimate, Estimate, SeededSampler};

use super::gfunction::GFunction;

/// `(R_{j,i} f)(H)`: average of `f` over the `i`-subspaces containing `H`
/// (`j < i`) or contained in `H` (`j > i`).
pub fn radon_apply(
    f: &GFunction,
    j: usize,
    h: &Subspace,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<Estimate> {
    let i = f.grass_dim();
    if i == j {
        return Err(dim_err(format!("Radon transform needs i != j, got i = j = {i}")));
    }
    if h.dim() != j || h.ambient_dim() != f.ambient_dim() {
        return Err(dim_err(format!(
            "H must be a {j}-subspace of R^{}, got a {}-subspace of R^{}",
            f.ambient_dim(),
            h.dim(),
            h.ambient_dim()
        )));
    }
    if j < i {
        if i > f.ambient_dim() {
            return Err(dim_err(format!("Gr_{i}(R^{}) is empty", f.ambient_dim())));
        }
        Ok(mc_estimate(samples, s, |s| {
            f.eval(&sample_containing(h, i, s).expect("checked"))
        }))
    } else {
        Ok(mc_estimate(samples, s, |s| {
            f.eval(&sample_within(h, i, s).expect("i < j"))
        }))
    }
}

/// `(T_{j,i} f)(E) = int_{Gr_i} |cos(E, F)| f(F) dF`.
pub fn cosine_apply(
    f: &GFunction,
    j: usize,
    e: &Subspace,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<Estimate> {
    let (n, i) = (f.ambient_dim(), f.grass_dim());
    if e.dim() != j || e.ambient_dim() != n {
        return Err(dim_err(format!(
            "E must be a {j}-subspace of R^{n}, got a {}-subspace of R^{}",
            e.dim(),
            e.ambient_dim()
        )));
    }
    if i > n {
        return Err(dim_err(format!("Gr_{i}(R^{n}) is empty")));
    }
    Ok(mc_estimate(samples, s, |s| {
        let fsub = haar_subspace(n, i, s).expect("i <= n");
        cos_angle(e, &fsub).expect("same ambient space") * f.eval(&fsub)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{haar_orthogonal, orthocomplement};
    use crate::transforms::gfunction::GFunctionSpec;
    use std::f64::consts::PI;

    #[test]
    fn constants_are_fixed() {
        let mut s = SeededSampler::new(1, 0);
        let h2 = haar_subspace(4, 2, &mut s).unwrap();
        for i in [1, 3] {
            let f = GFunction::constant(4, i, 1.0);
            let v = radon_apply(&f, 2, &h2, 500, &mut s).unwrap();
            assert!((v.mean - 1.0).abs() < 1e-14);
        }
        let f = GFunction::constant(4, 2, 1.0);
        assert!(radon_apply(&f, 2, &h2, 10, &mut s).is_err());
    }

    #[test]
    fn line_average_in_plane() {
        let quad = GFunctionSpec::LineQuadratic {
            matrix: vec![vec![-1.0 / 3.0, 0.0, 0.0], vec![0.0, -1.0 / 3.0, 0.0], vec![0.0, 0.0, 2.0 / 3.0]],
        };
        let f = GFunction::closed(3, 1, quad).unwrap();
        let h = Subspace::coordinate(3, &[0, 1]).unwrap();
        let v = radon_apply(&f, 2, &h, 2000, &mut SeededSampler::new(2, 0)).unwrap();
        assert!(v.within_sigma(-1.0 / 3.0, 3.0), "{v:?}");
    }

    #[test]
    fn cosine_of_one() {
        let mut s = SeededSampler::new(3, 0);
        let e2 = Subspace::coordinate(2, &[0]).unwrap();
        let v = cosine_apply(&GFunction::constant(2, 1, 1.0), 1, &e2, 40_000, &mut s).unwrap();
        assert!(v.within_sigma(2.0 / PI, 3.0), "{v:?}");
        let e3 = haar_subspace(3, 1, &mut s).unwrap();
        let v = cosine_apply(&GFunction::constant(3, 1, 1.0), 1, &e3, 40_000, &mut s).unwrap();
        assert!(v.within_sigma(0.5, 3.0), "{v:?}");
    }

    #[test]
    fn orthocomplement_symmetry() {
        // T f at E equals T (f o perp) at E^perp.
        let mut s = SeededSampler::new(4, 0);
        let f0 = haar_subspace(4, 1, &mut s).unwrap();
        let f = GFunction::closed(4, 1, GFunctionSpec::CosinePower { reference: f0.clone(), power: 2.0 }).unwrap();
        let fp = {
            let f0 = f0.clone();
            GFunction::custom(4, 3, move |g| cos_angle(&orthocomplement(g), &f0).unwrap().powi(2))
        };
        let e = haar_subspace(4, 1, &mut s).unwrap();
        let a = cosine_apply(&f, 1, &e, 40_000, &mut SeededSampler::new(5, 0)).unwrap();
        let b = cosine_apply(&fp, 3, &orthocomplement(&e), 40_000, &mut SeededSampler::new(6, 0)).unwrap();
        let sd = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 4.0 * sd, "{a:?} {b:?}");
    }

    #[test]
    fn equivariance() {
        let mut s = SeededSampler::new(7, 0);
        let g = haar_orthogonal(3, &mut s);
        let f0 = haar_subspace(3, 1, &mut s).unwrap();
        let h = haar_subspace(3, 2, &mut s).unwrap();
        let f = GFunction::closed(3, 1, GFunctionSpec::CosinePower { reference: f0.clone(), power: 2.0 }).unwrap();
        let g2 = g.clone();
        let f_rot = GFunction::custom(3, 1, move |e| cos_angle(&e.rotated(&g2), &f0).unwrap().powi(2));
        let a = radon_apply(&f_rot, 2, &h, 20_000, &mut SeededSampler::new(8, 0)).unwrap();
        let b = radon_apply(&f, 2, &h.rotated(&g), 20_000, &mut SeededSampler::new(9, 0)).unwrap();
        let sd = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
        assert!((a.mean - b.mean).abs() < 4.0 * sd);
    }
}
