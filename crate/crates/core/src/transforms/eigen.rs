//! Funk–Hecke eigenvalues of the cosine and Funk–Radon transforms on `Gr_1`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{dim_err, GeoError, Result};
use crate::special::{gauss_legendre_on, legendre_n};

const TOL: f64 = 1e-14;
const MAX_NODES: usize = 1 << 14;

/// `int_a^b f` by Gauss–Legendre with node doubling until two successive
/// values agree to `TOL` (absolute plus relative).
fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let rule = |m: usize| {
        let (x, w) = gauss_legendre_on(m, a, b);
        x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum::<f64>()
    };
    let mut m = 16;
    let mut prev = rule(m);
    while m < MAX_NODES {
        m *= 2;
        let cur = rule(m);
        if (cur - prev).abs() <= TOL * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(GeoError::Precision(format!("Gauss–Legendre on [{a}, {b}] stalled at {MAX_NODES} nodes")))
}

fn check(n: usize, d: usize) -> Result<()> {
    if n < 2 {
        return Err(dim_err(format!("need n >= 2, got {n}")));
    }
    if d % 2 == 1 {
        return Err(GeoError::Invalid(format!("degree must be even, got {d}")));
    }
    Ok(())
}

/// Eigenvalue of `f -> int |<u, v>| f(v) dv` on degree-`d` harmonics of `S^{n-1}`:
/// `int_0^pi |cos t| P_d(cos t) sin^{n-2} t dt / int_0^pi sin^{n-2} t dt`.
pub fn funk_hecke_cosine_eigen(n: usize, d: usize) -> Result<f64> {
    check(n, d)?;
    let w = |t: f64| t.sin().powi(n as i32 - 2);
    let num = |t: f64| t.cos().abs() * legendre_n(n, d, t.cos()) * w(t);
    let top = adaptive(&num, 0.0, FRAC_PI_2)? + adaptive(&num, FRAC_PI_2, PI)?;
    let bottom = adaptive(&w, 0.0, FRAC_PI_2)? + adaptive(&w, FRAC_PI_2, PI)?;
    Ok(top / bottom)
}

/// Eigenvalue of the average over great subspheres `u^perp` on degree-`d`
/// harmonics: `P_d(0)`.
pub fn funk_radon_eigen(n: usize, d: usize) -> Result<f64> {
    check(n, d)?;
    Ok(legendre_n(n, d, 0.0))
}
