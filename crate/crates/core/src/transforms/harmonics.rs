//! Real spherical harmonics on `S^{n-1}` built as a Gegenbauer chain of solid
//! harmonics, orthonormal for the uniform probability measure.

use crate::error::{GeoError, Result};
use crate::special::gegenbauer_coeffs;

use super::gfunction::{GFunction, GFunctionSpec};
use super::sphere::sphere_rule;

/// Factor `sum_i a_i x_m^{k-2i} rho_m^{2i}` with `rho_m^2 = x_1^2 + ... + x_m^2`.
#[derive(Debug, Clone)]
struct Level {
    coord: usize,
    k: usize,
    coeffs: Vec<f64>,
}

/// One harmonic of the chain basis.
#[derive(Debug, Clone)]
pub struct Harmonic {
    pub degree: usize,
    /// Degrees `d_n >= d_{n-1} >= ... >= d_2` of the chain.
    pub chain: Vec<usize>,
    pub sine: bool,
    levels: Vec<Level>,
    norm: f64,
}

impl Harmonic {
    fn raw(&self, x: &[f64]) -> f64 {
        let mut rho2 = vec![0.0; x.len() + 1];
        for (m, v) in x.iter().enumerate() {
            rho2[m + 1] = rho2[m] + v * v;
        }
        let mut value = 1.0;
        for lv in &self.levels {
            let t = x[lv.coord];
            let r2 = rho2[lv.coord + 1];
            let mut acc = 0.0;
            for (i, a) in lv.coeffs.iter().enumerate() {
                acc += a * t.powi((lv.k - 2 * i) as i32) * r2.powi(i as i32);
            }
            value *= acc;
        }
        let l = *self.chain.last().unwrap();
        let (mut re, mut im) = (1.0, 0.0);
        for _ in 0..l {
            (re, im) = (re * x[0] - im * x[1], re * x[1] + im * x[0]);
        }
        value * if self.sine { im } else { re }
    }

    /// Value at a unit vector `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.norm * self.raw(x)
    }
}

fn chains(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 2 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for j in 0..=d {
        for mut tail in chains(n - 1, j) {
            tail.insert(0, d);
            out.push(tail);
        }
    }
    out
}

fn build(n: usize, chain: Vec<usize>, sine: bool) -> Harmonic {
    let mut levels = Vec::new();
    for (pos, m) in (3..=n).rev().enumerate() {
        let k = chain[pos] - chain[pos + 1];
        let lambda = chain[pos + 1] as f64 + (m as f64 - 2.0) / 2.0;
        levels.push(Level {
            coord: m - 1,
            k,
            coeffs: gegenbauer_coeffs(k, lambda),
        });
    }
    let mut h = Harmonic {
        degree: chain[0],
        chain,
        sine,
        levels,
        norm: 1.0,
    };
    let rule = sphere_rule(n, 2 * h.degree);
    let sq = rule.integrate(|x| h.raw(x).powi(2));
    h.norm = 1.0 / sq.sqrt();
    h
}

/// All harmonics of `S^{n-1}` of exactly degree `d` (`n >= 2`).
pub fn harmonics_of_degree(n: usize, d: usize) -> Vec<Harmonic> {
    let mut out = Vec::new();
    for chain in chains(n, d) {
        let l = *chain.last().unwrap();
        out.push(build(n, chain.clone(), false));
        if l > 0 {
            out.push(build(n, chain, true));
        }
    }
    out
}

/// Even-degree harmonics `0, 2, ..., d_max` on `S^{n-1}`, grouped by degree.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub n: usize,
    pub d_max: usize,
    pub harmonics: Vec<Harmonic>,
}

impl HarmonicBasis {
    pub fn new(n: usize, d_max: usize) -> Result<Self> {
        check_scope(n, d_max)?;
        let harmonics = (0..=d_max)
            .step_by(2)
            .flat_map(|d| harmonics_of_degree(n, d))
            .collect();
        Ok(Self { n, d_max, harmonics })
    }

    pub fn len(&self) -> usize {
        self.harmonics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.harmonics.is_empty()
    }

    /// `(degree, order)` per basis element, order counted within the degree.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len());
        let mut prev = usize::MAX;
        let mut order = 0;
        for h in &self.harmonics {
            if h.degree != prev {
                prev = h.degree;
                order = 0;
            }
            out.push((h.degree, order));
            order += 1;
        }
        out
    }

    /// Index ranges of the degree blocks, as `(degree, start, end)`.
    pub fn blocks(&self) -> Vec<(usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for (i, h) in self.harmonics.iter().enumerate() {
            match out.last_mut() {
                Some(b) if b.0 == h.degree => b.2 = i + 1,
                _ => out.push((h.degree, i, i + 1)),
            }
        }
        out
    }

    pub fn eval_all(&self, x: &[f64], out: &mut [f64]) {
        for (o, h) in out.iter_mut().zip(&self.harmonics) {
            *o = h.eval(x);
        }
    }
}

/// The even harmonic basis as functions on `Gr_1(R^n)` (lines `+-u`).
pub fn even_harmonic_basis(n: usize, d_max: usize) -> Result<Vec<GFunction>> {
    let basis = HarmonicBasis::new(n, d_max)?;
    basis
        .labels()
        .into_iter()
        .map(|(degree, order)| GFunction::closed(n, 1, GFunctionSpec::EvenHarmonic { degree, order }))
        .collect()
}

/// Dimension of the space of degree-`d` harmonics on `S^{n-1}`.
pub fn harmonic_dimension(n: usize, d: usize) -> usize {
    match n {
        0 | 1 => usize::from(d <= 1),
        2 => {
            if d == 0 {
                1
            } else {
                2
            }
        }
        _ => (0..=d).map(|j| harmonic_dimension(n - 1, j)).sum(),
    }
}

pub(crate) fn check_scope(n: usize, d_max: usize) -> Result<()> {
    if n != 3 && n != 4 {
        return Err(GeoError::Scope(format!(
            "even harmonic bases are provided for n = 3, 4 only, got n = {n}"
        )));
    }
    if d_max % 2 == 1 || d_max > 12 {
        return Err(GeoError::Invalid(format!(
            "d_max must be even and at most 12, got {d_max}"
        )));
    }
    Ok(())
}
