//! Multiplication by intrinsic volumes on Klain functions: the average of
//! `|cos(L, R)|` over `R` containing `F`, the ellipsoid identity behind it, and
//! the composed transform `T R f`.

use serde::{Deserialize, Serialize};

use crate::error::{dim_err, Result};
use crate::grassmann::{
    cos_angle, ellipsoid_image_volume, haar_subspace, sample_containing, sample_within, sin_angle,
    span_sum, Subspace,
};
use crate::sampler::{mc_estimate, Estimate, SeededSampler};
use crate::special::kappa;
use crate::transforms::GFunction;

use super::evaluate::stacked_projection;

/// `E_R |cos(L, R)|` over `R in Gr_{k+i}` containing `F` (`dim F = i`,
/// `dim L = k + i`), with `R = F + W` for Haar `W` in `F^perp`.
pub fn lemma22_formula(
    f: &Subspace,
    k: usize,
    l: &Subspace,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<Estimate> {
    let n = f.ambient_dim();
    let i = f.dim();
    if l.ambient_dim() != n {
        return Err(dim_err("F and L live in different spaces"));
    }
    if i + k > n || l.dim() != i + k {
        return Err(dim_err(format!(
            "need i + k <= n and dim L = i + k, got i = {i}, k = {k}, dim L = {}, n = {n}",
            l.dim()
        )));
    }
    if k == 0 {
        return Ok(Estimate::exact(cos_angle(l, f)?));
    }
    Ok(mc_estimate(samples, s, |s| {
        let r = sample_containing(f, i + k, s).expect("checked dimensions");
        cos_angle(l, &r).expect("same space")
    }))
}

/// Both sides of `vol((Pr_E + Pr_F)(D_L)) = kappa_{k+i} |cos(L, E + F)| |sin(E, F)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Claim23 {
    pub lhs: f64,
    pub rhs: f64,
    pub degenerate: bool,
}

pub fn claim23_check(e: &Subspace, f: &Subspace, l: &Subspace) -> Result<Claim23> {
    let n = e.ambient_dim();
    if f.ambient_dim() != n || l.ambient_dim() != n {
        return Err(dim_err("E, F, L live in different spaces"));
    }
    let m = e.dim() + f.dim();
    if l.dim() != m {
        return Err(dim_err(format!(
            "dim L = {} differs from dim E + dim F = {m}",
            l.dim()
        )));
    }
    let sum = span_sum(e, f)?;
    if sum.dim() < m {
        return Ok(Claim23 {
            lhs: 0.0,
            rhs: 0.0,
            degenerate: true,
        });
    }
    let lhs = ellipsoid_image_volume(&stacked_projection(e, f), l)?;
    let rhs = kappa(m) * cos_angle(l, &sum)? * sin_angle(e, f)?;
    Ok(Claim23 {
        lhs,
        rhs,
        degenerate: false,
    })
}

/// `L -> (T_{k+i,k+i} R_{k+i,i} f)(L)` on `Gr_{k+i}`: Haar `R` in `Gr_{k+i}`,
/// and for each `R` the average of `f` over `inner` Haar `i`-subspaces of `R`
/// from a sub-stream. Deterministic for fixed `seed`.
pub fn multiply_by_intrinsic(
    f: &GFunction,
    k: usize,
    outer: usize,
    inner: usize,
    seed: u64,
) -> Result<GFunction> {
    let n = f.ambient_dim();
    let i = f.grass_dim();
    if i + k > n || outer == 0 || inner == 0 {
        return Err(dim_err(format!(
            "need i + k <= n and positive budgets, got i = {i}, k = {k}, n = {n}"
        )));
    }
    let f = f.clone();
    let m = k + i;
    Ok(GFunction::custom(n, m, move |l| {
        multiply_eval(&f, m, l, outer, inner, &mut SeededSampler::new(seed, 0)).mean
    }))
}

/// One evaluation of the composed transform with its standard error.
pub fn multiply_eval(
    f: &GFunction,
    m: usize,
    l: &Subspace,
    outer: usize,
    inner: usize,
    s: &mut SeededSampler,
) -> Estimate {
    let n = f.ambient_dim();
    let i = f.grass_dim();
    mc_estimate(outer, s, |s| {
        let r = if m == n {
            Subspace::full(n)
        } else {
            haar_subspace(n, m, s).expect("m < n")
        };
        let c = cos_angle(l, &r).expect("same space");
        let mut sub = s.child();
        let avg = if i == m {
            f.eval(&r)
        } else {
            (0..inner)
                .map(|_| f.eval(&sample_within(&r, i, &mut sub).expect("i < m")))
                .sum::<f64>()
                / inner as f64
        };
        c * avg
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::orthocomplement;

    #[test]
    fn lemma22_degenerate_integral() {
        let mut s = SeededSampler::new(1, 0);
        let f = haar_subspace(4, 2, &mut s).unwrap();
        let l = haar_subspace(4, 2, &mut s).unwrap();
        let v = lemma22_formula(&f, 0, &l, 10, &mut s).unwrap();
        assert_eq!(v.mean, cos_angle(&l, &f).unwrap());
        assert_eq!(v.std_err, 0.0);
    }

    #[test]
    fn claim23_special_cases() {
        let e = Subspace::coordinate(4, &[0]).unwrap();
        let f = Subspace::coordinate(4, &[1]).unwrap();
        let l = Subspace::coordinate(4, &[0, 1]).unwrap();
        let c = claim23_check(&e, &f, &l).unwrap();
        assert!((c.lhs - kappa(2)).abs() < 1e-12 && (c.rhs - kappa(2)).abs() < 1e-12);
        let l2 = Subspace::coordinate(4, &[0, 2]).unwrap();
        let c = claim23_check(&e, &f, &l2).unwrap();
        assert!(c.lhs.abs() < 1e-12 && c.rhs.abs() < 1e-12);
        let c = claim23_check(&e, &e, &l).unwrap();
        assert!(c.degenerate && c.lhs == 0.0 && c.rhs == 0.0);
        assert!(claim23_check(&e, &f, &e).is_err());
    }

    #[test]
    fn composed_transform_of_constant() {
        let one = GFunction::constant(3, 1, 1.0);
        let g = multiply_by_intrinsic(&one, 1, 20_000, 1, 7).unwrap();
        assert_eq!(g.grass_dim(), 2);
        let mut s = SeededSampler::new(2, 0);
        let a = g.eval(&haar_subspace(3, 2, &mut s).unwrap());
        let b = g.eval(&orthocomplement(&haar_subspace(3, 1, &mut s).unwrap()));
        // T of a constant on Gr_2(R^3) is the mean of |cos|, 1/2.
        assert!((a - 0.5).abs() < 0.01 && (b - 0.5).abs() < 0.01, "{a} {b}");
    }
}
