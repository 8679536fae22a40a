//! Ball volumes, binomials, Gegenbauer polynomials, Gauss rules and least-squares
//! polynomial fitting.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{GeoError, Result};

/// Volume of the unit ball in `R^d`.
pub fn kappa(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => kappa(d - 2) * 2.0 * PI / d as f64,
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

/// Intrinsic volume `V_k` of the unit ball of `R^n`.
pub fn ball_intrinsic_volume(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    binomial(n, k) * kappa(n) / kappa(n - k)
}

/// Normalizing constant of the Cauchy–Kubota average, fixed by exactness on the
/// unit ball: every `k`-dimensional shadow of `B^n` is a unit `k`-ball.
pub fn kubota_constant(n: usize, k: usize) -> f64 {
    ball_intrinsic_volume(n, k) / kappa(k)
}

/// Elementary symmetric polynomials `e_0..e_m` of `values`.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (m, &x) in values.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            e[j] += e[j - 1] * x;
        }
    }
    e
}

/// Gegenbauer polynomial `C_k^lambda(t)` by the three-term recurrence.
pub fn gegenbauer(k: usize, lambda: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * t;
    for j in 2..=k {
        let jf = j as f64;
        let next = (2.0 * t * (jf + lambda - 1.0) * cur - (jf + 2.0 * lambda - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients of `C_k^lambda`: `C_k(t) = sum_j coeff[j] * t^(k-2j)`.
pub fn gegenbauer_coeffs(k: usize, lambda: f64) -> Vec<f64> {
    (0..=k / 2)
        .map(|j| {
            // (lambda)_{k-j} / (j! (k-2j)!) * 2^{k-2j} * (-1)^j
            let poch = (0..k - j).fold(1.0, |acc, i| acc * (lambda + i as f64));
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * poch * 2f64.powi((k - 2 * j) as i32) / (factorial(j) * factorial(k - 2 * j))
        })
        .collect()
}

/// Legendre polynomial of degree `d` in dimension `n`, normalized to 1 at `t = 1`.
pub fn legendre_n(n: usize, d: usize, t: f64) -> f64 {
    if n == 2 {
        return (d as f64 * t.clamp(-1.0, 1.0).acos()).cos();
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    gegenbauer(d, lambda, t) / gegenbauer(d, lambda, 1.0)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        nodes[m - 1 - i] = -x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(m);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&v| v * half).collect(),
    )
}

/// Gauss rule for the weight `(1 - t^2)^alpha` on `[-1, 1]`, weights normalized
/// to sum to one (Golub–Welsch). `alpha = -1/2` is handled in closed form.
pub fn gauss_gegenbauer(m: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    if (alpha + 0.5).abs() < 1e-14 {
        let nodes = (1..=m)
            .map(|j| ((2 * j - 1) as f64 * PI / (2 * m) as f64).cos())
            .collect();
        return (nodes, vec![1.0 / m as f64; m]);
    }
    if m == 1 {
        return (vec![0.0], vec![1.0]);
    }
    let off: Vec<f64> = (1..m)
        .map(|k| {
            let k = k as f64;
            let a2 = 2.0 * alpha;
            (k * (k + a2) / ((2.0 * k + a2 - 1.0) * (2.0 * k + a2 + 1.0))).sqrt()
        })
        .collect();
    let mut tri = DMatrix::zeros(m, m);
    for (k, &b) in off.iter().enumerate() {
        tri[(k, k + 1)] = b;
        tri[(k + 1, k)] = b;
    }
    let eig = tri.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|j| (eig.eigenvalues[j], eig.eigenvectors[(0, j)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    (
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1 / total).collect(),
    )
}

/// Chebyshev nodes of the first kind on `[a, b]`, ascending.
pub fn chebyshev_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..m)
        .map(|j| {
            let x = ((2 * j + 1) as f64 * PI / (2 * m) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * x
        })
        .collect();
    g.sort_by(|x, y| x.total_cmp(y));
    g
}

/// Least-squares polynomial fit of degree `degree` (coefficients in ascending powers).
#[derive(Debug, Clone)]
pub struct PolyFit {
    pub coefficients: Vec<f64>,
    /// RMS residual divided by RMS of the data.
    pub relative_residual: f64,
    /// Condition number of the Vandermonde matrix.
    pub condition_number: f64,
    /// Linear map data -> coefficients (pseudo-inverse rows).
    pub pinv: DMatrix<f64>,
}

pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<PolyFit> {
    if x.len() != y.len() || x.len() < degree + 1 {
        return Err(GeoError::Invalid(format!(
            "need at least {} points for a degree-{} fit, got {}",
            degree + 1,
            degree,
            x.len()
        )));
    }
    let m = x.len();
    let vander = DMatrix::from_fn(m, degree + 1, |i, j| x[i].powi(j as i32));
    let svd = vander.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let pinv = svd
        .pseudo_inverse(smax * 1e-14)
        .map_err(|e| GeoError::Invalid(e.to_string()))?;
    let coef = &pinv * DVector::from_column_slice(y);
    let fitted = &vander * &coef;
    let res: f64 = (0..m).map(|i| (fitted[i] - y[i]).powi(2)).sum::<f64>() / m as f64;
    let scale: f64 = y.iter().map(|v| v * v).sum::<f64>() / m as f64;
    let rel = if scale > 0.0 { (res / scale).sqrt() } else { res.sqrt() };
    Ok(PolyFit {
        coefficients: coef.iter().copied().collect(),
        relative_residual: rel,
        condition_number: cond,
        pinv,
    })
}
