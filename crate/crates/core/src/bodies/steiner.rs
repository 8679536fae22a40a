//! Parallel volumes `vol(K + eps D)`, Steiner polynomials and intrinsic-volume oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{dim_err, GeoError, Result};
use crate::sampler::{Estimate, SeededSampler, CHUNK};
use crate::special::{binomial, chebyshev_grid, elementary_symmetric, kappa, polyfit};

use super::hull::{convex_hull, hull_volume_points, polygon_perimeter};
use super::nearest::nearest_point;
use super::polytope::Polytope;

/// Condition number above which a Steiner fit carries a warning.
pub const CONDITION_LIMIT: f64 = 1e8;

/// Intrinsic volumes `V_0..V_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumeVector {
    pub values: Vec<f64>,
}

impl IntrinsicVolumeVector {
    pub fn get(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditioningWarning {
    pub condition_number: f64,
}

/// `vol(K + eps D) = sum_m c_m eps^m` with `c_m = kappa_m V_{n-m}(K)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteinerPolynomial {
    pub degree: usize,
    /// `c_0..c_n`, ascending powers of `eps`.
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Relative RMS residual of the least-squares fit.
    pub residual: f64,
    pub condition_number: f64,
    pub warning: Option<ConditioningWarning>,
}

impl SteinerPolynomial {
    pub fn eval(&self, eps: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * eps + c)
    }

    pub fn intrinsic_volumes(&self) -> IntrinsicVolumeVector {
        let n = self.degree;
        IntrinsicVolumeVector {
            values: (0..=n).map(|j| self.coefficients[n - j] / kappa(n - j)).collect(),
        }
    }

    /// Standard errors of `V_0..V_n`.
    pub fn intrinsic_volume_errors(&self) -> Vec<f64> {
        let n = self.degree;
        (0..=n).map(|j| self.std_errors[n - j] / kappa(n - j)).collect()
    }
}

/// Distances `d(x, P)` of stratified jittered points of a box around `P`.
///
/// Points farther than `eps_max` are recorded as infinite. Sample `i` falls in
/// stratum `i mod strata`, with `strata = m^n` the largest such power not
/// exceeding the sample count.
#[derive(Debug, Clone)]
pub struct DistanceSample {
    box_volume: f64,
    strata: usize,
    distances: Vec<f64>,
}

impl DistanceSample {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Estimate of `int_box g(d(x)) dx` with a collapsed-strata standard error.
    pub fn integral(&self, g: impl Fn(f64) -> f64) -> Estimate {
        let m = self.strata;
        let mut sums = vec![0.0; m];
        let mut counts = vec![0usize; m];
        for (i, &d) in self.distances.iter().enumerate() {
            sums[i % m] += g(d);
            counts[i % m] += 1;
        }
        let means: Vec<f64> = sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();
        let w = self.box_volume / m as f64;
        let mean = w * means.iter().sum::<f64>();
        let var: f64 = means
            .chunks_exact(2)
            .map(|p| (w * (p[0] - p[1])).powi(2))
            .sum();
        Estimate {
            mean,
            std_err: var.sqrt(),
            samples: self.distances.len(),
        }
    }

    /// `vol(P + eps D)`.
    pub fn parallel_volume(&self, eps: f64) -> Estimate {
        self.integral(|d| if d <= eps { 1.0 } else { 0.0 })
    }
}

fn integer_root(n: usize, dim: u32) -> usize {
    let mut m = (n as f64).powf(1.0 / dim as f64).floor() as usize;
    while (m + 1).checked_pow(dim).is_some_and(|p| p <= n) {
        m += 1;
    }
    while m > 1 && m.pow(dim) > n {
        m -= 1;
    }
    m.max(1)
}

/// Samples `d(x, P)` at `samples` stratified points of the bounding box of `P`
/// grown by `eps_max`.
pub fn sample_distances(
    p: &Polytope,
    eps_max: f64,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<DistanceSample> {
    let n = p.ambient_dim();
    if n == 0 || samples < 2 {
        return Err(GeoError::Invalid("need n >= 1 and at least 2 samples".into()));
    }
    let (mut lo, mut hi) = p.bounding_box();
    for j in 0..n {
        lo[j] -= eps_max;
        hi[j] += eps_max;
    }
    let width: Vec<f64> = (0..n).map(|j| hi[j] - lo[j]).collect();
    let box_volume: f64 = width.iter().product();
    let m = integer_root(samples, n as u32);
    let strata = m.pow(n as u32);
    let hull = if p.is_full_dimensional() { convex_hull(p.vertices()) } else { None };
    let (plo, phi) = p.bounding_box();
    let verts = p.vertices();

    let key = s.fork_key();
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = SeededSampler::new(key, c as u64);
            let start = c * CHUNK;
            let end = (start + CHUNK).min(samples);
            let mut out = Vec::with_capacity(end - start);
            let mut x = vec![0.0; n];
            for i in start..end {
                let mut t = i % strata;
                for j in 0..n {
                    let cell = t % m;
                    t /= m;
                    x[j] = lo[j] + width[j] * (cell as f64 + rng.uniform()) / m as f64;
                }
                let bound = match &hull {
                    Some(h) => h.max_violation(&x),
                    None => (0..n)
                        .map(|j| (plo[j] - x[j]).max(x[j] - phi[j]).max(0.0).powi(2))
                        .sum::<f64>()
                        .sqrt(),
                };
                let d = if hull.is_some() && bound <= 0.0 {
                    0.0
                } else if bound > eps_max {
                    f64::INFINITY
                } else {
                    nearest_point(verts, &x)?.distance
                };
                out.push(d);
            }
            Ok(out)
        })
        .collect();
    let mut distances = Vec::with_capacity(samples);
    for part in parts {
        distances.extend(part?);
    }
    Ok(DistanceSample {
        box_volume,
        strata,
        distances,
    })
}

/// `vol(P + eps D)` for each `eps`, by Monte-Carlo membership.
pub fn parallel_volumes_mc(
    p: &Polytope,
    eps: &[f64],
    samples: usize,
    s: &mut SeededSampler,
) -> Result<Vec<Estimate>> {
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let ds = sample_distances(p, eps_max, samples, s)?;
    Ok(eps.iter().map(|&e| ds.parallel_volume(e)).collect())
}

/// Exact `vol(P + eps D)` for ambient dimension 1 or 2.
pub fn parallel_volumes_exact(p: &Polytope, eps: &[f64]) -> Result<Vec<f64>> {
    match p.ambient_dim() {
        1 => {
            let (lo, hi) = p.bounding_box();
            Ok(eps.iter().map(|e| hi[0] - lo[0] + 2.0 * e).collect())
        }
        2 => {
            let area = hull_volume_points(p.vertices());
            let per = polygon_perimeter(p.vertices());
            Ok(eps
                .iter()
                .map(|e| area + per * e + std::f64::consts::PI * e * e)
                .collect())
        }
        n => Err(dim_err(format!("exact parallel volumes need n <= 2, got {n}"))),
    }
}

/// Chebyshev grid on `[0, diam P]` with `2n + 3` points (`[0, 1]` for a point).
pub fn default_grid(p: &Polytope) -> Vec<f64> {
    let diam = p.diameter();
    let top = if diam > 0.0 { diam } else { 1.0 };
    chebyshev_grid(0.0, top, 2 * p.ambient_dim() + 3)
}

fn check_grid(grid: &[f64], n: usize) -> Result<()> {
    if grid.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(GeoError::Invalid("eps grid must be finite and nonnegative".into()));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() < n + 1 {
        return Err(GeoError::Invalid(format!(
            "eps grid needs at least {} distinct points, got {}",
            n + 1,
            sorted.len()
        )));
    }
    Ok(())
}

/// Degree-`n` least-squares fit of Monte-Carlo parallel volumes over `grid`.
pub fn steiner_fit(
    p: &Polytope,
    grid: &[f64],
    samples: usize,
    s: &mut SeededSampler,
) -> Result<SteinerPolynomial> {
    let n = p.ambient_dim();
    check_grid(grid, n)?;
    let eps_max = grid.iter().copied().fold(0.0, f64::max);
    let ds = sample_distances(p, eps_max, samples, s)?;
    let y: Vec<f64> = grid.iter().map(|&e| ds.parallel_volume(e).mean).collect();
    let fit = polyfit(grid, &y, n)?;
    let std_errors = (0..=n)
        .map(|m| {
            let row: Vec<f64> = (0..grid.len()).map(|g| fit.pinv[(m, g)]).collect();
            ds.integral(|d| {
                grid.iter()
                    .zip(&row)
                    .filter(|(e, _)| d <= **e)
                    .map(|(_, w)| w)
                    .sum()
            })
            .std_err
        })
        .collect();
    Ok(SteinerPolynomial {
        degree: n,
        coefficients: fit.coefficients,
        std_errors,
        residual: fit.relative_residual,
        condition_number: fit.condition_number,
        warning: (fit.condition_number > CONDITION_LIMIT).then_some(ConditioningWarning {
            condition_number: fit.condition_number,
        }),
    })
}

/// `V_j(box) = e_j(sides)`.
pub fn box_intrinsic_volumes(sides: &[f64]) -> Result<IntrinsicVolumeVector> {
    if sides.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(GeoError::Invalid("box sides must be nonnegative".into()));
    }
    Ok(IntrinsicVolumeVector {
        values: elementary_symmetric(sides),
    })
}

/// `V_j(r B^n) = binom(n, j) kappa_n / kappa_{n-j} r^j`.
pub fn ball_intrinsic_volumes(n: usize, r: f64) -> Result<IntrinsicVolumeVector> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(GeoError::Invalid("radius must be nonnegative".into()));
    }
    Ok(IntrinsicVolumeVector {
        values: (0..=n)
            .map(|j| binomial(n, j) * kappa(n) / kappa(n - j) * r.powi(j as i32))
            .collect(),
    })
}
