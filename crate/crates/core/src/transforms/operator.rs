//! Matrix of the composed cosine-after-Funk operator on even harmonics of
//! `Gr_1(R^n)`, and its spectrum.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};
use crate::grassmann::{orthocomplement, Subspace};
use crate::sampler::{par_map_streams, Accumulator, SeededSampler};
use crate::special::gauss_legendre_on;

use super::eigen::{funk_hecke_cosine_eigen, funk_radon_eigen};
use super::harmonics::{check_scope, HarmonicBasis};
use super::sphere::{sphere_rule, SphereRule};

/// Relative off-diagonal mass tolerated by [`lefschetz_probe`].
pub const LEAKAGE_TOL: f64 = 1e-2;

/// Diagonal average of one degree block with its Monte-Carlo error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeScalar {
    pub degree: usize,
    pub multiplicity: usize,
    pub scalar: f64,
    pub std_err: f64,
}

/// `O_ab = <Y_a, T R Y_b>` over the even harmonics of degree `<= d_max`,
/// where `R` averages over the lines of `u^perp` and `T` has kernel `|<u, v>|`.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub n: usize,
    pub d_max: usize,
    /// `(degree, order)` of each row and column.
    pub labels: Vec<(usize, usize)>,
    pub matrix: DMatrix<f64>,
    pub degree_scalars: Vec<DegreeScalar>,
    /// Root-mean-square Monte-Carlo standard error of the entries.
    pub entry_std_err: f64,
    pub samples_per_node: usize,
    pub nodes: usize,
}

impl OperatorMatrix {
    /// `D`: each degree block replaced by its scalar times the identity.
    pub fn block_scalar_matrix(&self) -> DMatrix<f64> {
        let b = self.labels.len();
        DMatrix::from_fn(b, b, |i, j| {
            if i != j {
                return 0.0;
            }
            let d = self.labels[i].0;
            self.degree_scalars.iter().find(|s| s.degree == d).map_or(0.0, |s| s.scalar)
        })
    }

    /// `||O - D||_F / ||D||_F`.
    pub fn leakage(&self) -> f64 {
        let d = self.block_scalar_matrix();
        (&self.matrix - &d).norm() / d.norm()
    }

    /// Header row of labels `d<degree>_<order>`, then one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for (d, o) in &self.labels {
            out.push_str(&format!(",d{d}_{o}"));
        }
        out.push('\n');
        for (i, (d, o)) in self.labels.iter().enumerate() {
            out.push_str(&format!("d{d}_{o}"));
            for j in 0..self.labels.len() {
                out.push_str(&format!(",{:e}", self.matrix[(i, j)]));
            }
            out.push('\n');
        }
        out
    }
}

/// `(T Y_a)(r)` for all basis elements, by a Gauss rule in the polar angle
/// about `r` (split at the equator where `|<u, r>|` has its kink) times an exact
/// rule on the subspheres of constant latitude.
fn cosine_transform_at(
    basis: &HarmonicBasis,
    r: &[f64],
    perp: &Subspace,
    theta: &(Vec<f64>, Vec<f64>),
    inner: &SphereRule,
) -> Vec<f64> {
    let n = basis.n;
    let b = basis.len();
    let mut out = vec![0.0; b];
    let mut vals = vec![0.0; b];
    let mut u = vec![0.0; n];
    let mut total = 0.0;
    let q = perp.basis();
    for (&th, &wth) in theta.0.iter().zip(&theta.1) {
        let (st, ct) = th.sin_cos();
        let dens = wth * ct.powi(n as i32 - 2);
        total += 2.0 * dens;
        for sign in [1.0, -1.0] {
            let t = sign * st;
            for (w, &ww) in inner.points.iter().zip(&inner.weights) {
                for i in 0..n {
                    u[i] = t * r[i] + ct * (0..n - 1).map(|k| q[(i, k)] * w[k]).sum::<f64>();
                }
                basis.eval_all(&u, &mut vals);
                let c = dens * ww * st;
                out.iter_mut().zip(&vals).for_each(|(o, v)| *o += c * v);
            }
        }
    }
    out.iter_mut().for_each(|o| *o /= total);
    out
}

struct NodeResult {
    h: Vec<f64>,
    g: Vec<f64>,
    g2: Vec<f64>,
    z: Vec<Accumulator>,
}

/// Assembles the operator matrix for `i = 1`, `n` in `{3, 4}`, even `d_max <= 12`.
///
/// The outer integral and the cosine transform use quadrature; the Funk average
/// at each outer node uses `samples` random lines of `r^perp`.
pub fn operator_matrix_even(
    n: usize,
    i: usize,
    d_max: usize,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<OperatorMatrix> {
    if i != 1 {
        return Err(GeoError::Scope(format!("spectral probes cover i = 1 only, got i = {i}")));
    }
    check_scope(n, d_max)?;
    if samples < 2 {
        return Err(GeoError::Invalid("need at least 2 samples per node".into()));
    }
    let basis = HarmonicBasis::new(n, d_max)?;
    let blocks = basis.blocks();
    let b = basis.len();
    let outer = sphere_rule(n, 2 * d_max);
    let inner = sphere_rule(n - 1, d_max);
    let theta = gauss_legendre_on(d_max + 16, 0.0, FRAC_PI_2);

    let nodes: Vec<NodeResult> = par_map_streams(outer.len(), s, |q, rng| {
        let r = &outer.points[q];
        let wq = outer.weights[q];
        let line = Subspace::from_columns(n, std::slice::from_ref(r)).expect("unit vector");
        let perp = orthocomplement(&line);
        let h = cosine_transform_at(&basis, r, &perp, &theta, &inner);
        let mut g = vec![0.0; b];
        let mut g2 = vec![0.0; b];
        let mut z = vec![Accumulator::default(); blocks.len()];
        let mut y = vec![0.0; b];
        let mut v = vec![0.0; n];
        for _ in 0..samples {
            let w = rng.unit_vector(n - 1);
            for (k, vk) in v.iter_mut().enumerate() {
                *vk = (0..n - 1).map(|m| perp.basis()[(k, m)] * w[m]).sum();
            }
            basis.eval_all(&v, &mut y);
            for k in 0..b {
                g[k] += y[k];
                g2[k] += y[k] * y[k];
            }
            for (acc, &(_, lo, hi)) in z.iter_mut().zip(&blocks) {
                let zz: f64 = (lo..hi).map(|k| h[k] * y[k]).sum::<f64>() * wq / (hi - lo) as f64;
                acc.push(zz);
            }
        }
        let m = samples as f64;
        for k in 0..b {
            g[k] /= m;
            g2[k] = (g2[k] / m - g[k] * g[k]).max(0.0) * m / (m - 1.0);
        }
        NodeResult { h, g, g2, z }
    });

    let mut matrix = DMatrix::zeros(b, b);
    let mut scalars = vec![0.0; blocks.len()];
    let mut vars = vec![0.0; blocks.len()];
    let mut entry_var = DMatrix::<f64>::zeros(b, b);
    for (q, node) in nodes.iter().enumerate() {
        let wq = outer.weights[q];
        for a in 0..b {
            for c in 0..b {
                matrix[(a, c)] += wq * node.h[a] * node.g[c];
                entry_var[(a, c)] += (wq * node.h[a]).powi(2) * node.g2[c] / samples as f64;
            }
        }
        for (k, acc) in node.z.iter().enumerate() {
            scalars[k] += acc.mean();
            vars[k] += acc.variance() / samples as f64;
        }
    }
    let degree_scalars = blocks
        .iter()
        .enumerate()
        .map(|(k, &(d, lo, hi))| DegreeScalar {
            degree: d,
            multiplicity: hi - lo,
            scalar: scalars[k],
            std_err: vars[k].sqrt(),
        })
        .collect();
    Ok(OperatorMatrix {
        n,
        d_max,
        labels: basis.labels(),
        matrix,
        degree_scalars,
        entry_std_err: (entry_var.sum() / (b * b) as f64).sqrt(),
        samples_per_node: samples,
        nodes: outer.len(),
    })
}

/// One degree block of a [`SpectrumReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeSpectrum {
    pub degree: usize,
    pub multiplicity: usize,
    pub scalar: f64,
    pub std_err: f64,
    pub cosine_eigen: f64,
    pub radon_eigen: f64,
    /// `cosine_eigen * radon_eigen`.
    pub predicted: f64,
    /// `(scalar - predicted) / std_err`, after a `1e-12` absolute allowance
    /// for quadrature rounding.
    pub z_score: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub i: usize,
    pub d_max: usize,
    pub samples_per_node: usize,
    pub nodes: usize,
    pub degrees: Vec<DegreeSpectrum>,
    pub leakage: f64,
    /// Root-mean-square Monte-Carlo standard error of the matrix entries.
    pub entry_std_err: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub smallest_singular_value: f64,
    /// `0.1 * min_d |cosine_eigen * radon_eigen|`.
    pub floor: f64,
    /// Smallest singular value above the floor.
    pub injective: bool,
}

impl SpectrumReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn z_score(diff: f64, std_err: f64) -> f64 {
    let excess = (diff.abs() - 1e-12).max(0.0);
    if excess == 0.0 {
        0.0
    } else {
        excess.copysign(diff) / std_err
    }
}

/// Builds the operator matrix and summarizes its spectrum on the band-limited
/// even harmonics of degree `<= d_max`.
pub fn lefschetz_probe(
    n: usize,
    i: usize,
    d_max: usize,
    samples: usize,
    s: &mut SeededSampler,
) -> Result<(SpectrumReport, OperatorMatrix)> {
    let op = operator_matrix_even(n, i, d_max, samples, s)?;
    let mut degrees = Vec::new();
    for ds in &op.degree_scalars {
        let ct = funk_hecke_cosine_eigen(n, ds.degree)?;
        let rt = funk_radon_eigen(n, ds.degree)?;
        let predicted = ct * rt;
        degrees.push(DegreeSpectrum {
            degree: ds.degree,
            multiplicity: ds.multiplicity,
            scalar: ds.scalar,
            std_err: ds.std_err,
            cosine_eigen: ct,
            radon_eigen: rt,
            predicted,
            z_score: z_score(ds.scalar - predicted, ds.std_err),
        });
    }
    let mut singular_values: Vec<f64> = op.matrix.clone().singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let smallest = *singular_values.last().unwrap_or(&0.0);
    let floor = 0.1
        * degrees
            .iter()
            .map(|d| d.predicted.abs())
            .fold(f64::INFINITY, f64::min);
    let report = SpectrumReport {
        n,
        i,
        d_max,
        samples_per_node: samples,
        nodes: op.nodes,
        degrees,
        leakage: op.leakage(),
        entry_std_err: op.entry_std_err,
        singular_values,
        smallest_singular_value: smallest,
        floor,
        injective: smallest > floor,
    };
    Ok((report, op))
}
