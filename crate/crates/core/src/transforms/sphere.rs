//! Product quadrature on unit spheres for the uniform probability measure.

use std::f64::consts::PI;

use crate::special::gauss_gegenbauer;

/// Nodes and weights on `S^{n-1}`; weights sum to one.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

/// Rule on `S^{n-1}` exact for polynomials of degree `<= degree`.
///
/// The last coordinate `t` uses a Gauss rule for the weight
/// `(1 - t^2)^{(n-3)/2}`; the remaining coordinates reuse the rule on
/// `S^{n-2}` scaled by `sqrt(1 - t^2)`. The circle uses the trapezoid rule.
pub fn sphere_rule(n: usize, degree: usize) -> SphereRule {
    match n {
        0 => SphereRule {
            n,
            points: Vec::new(),
            weights: Vec::new(),
        },
        1 => SphereRule {
            n,
            points: vec![vec![1.0], vec![-1.0]],
            weights: vec![0.5, 0.5],
        },
        2 => {
            let m = degree + 1;
            SphereRule {
                n,
                points: (0..m)
                    .map(|j| {
                        let a = 2.0 * PI * j as f64 / m as f64;
                        vec![a.cos(), a.sin()]
                    })
                    .collect(),
                weights: vec![1.0 / m as f64; m],
            }
        }
        _ => {
            let lower = sphere_rule(n - 1, degree);
            let (ts, tw) = gauss_gegenbauer(degree / 2 + 1, (n as f64 - 3.0) / 2.0);
            let mut points = Vec::with_capacity(ts.len() * lower.len());
            let mut weights = Vec::with_capacity(ts.len() * lower.len());
            for (&t, &wt) in ts.iter().zip(&tw) {
                let r = (1.0 - t * t).max(0.0).sqrt();
                for (p, &wp) in lower.points.iter().zip(&lower.weights) {
                    let mut x: Vec<f64> = p.iter().map(|v| r * v).collect();
                    x.push(t);
                    points.push(x);
                    weights.push(wt * wp);
                }
            }
            SphereRule { n, points, weights }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        for n in 2..=5 {
            let rule = sphere_rule(n, 8);
            assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            for p in &rule.points {
                assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-13);
            }
            // E[x_0^2] = 1/n, E[x_0^4] = 3/(n(n+2)), E[x_0^2 x_1^2] = 1/(n(n+2)).
            let nf = n as f64;
            assert!((rule.integrate(|x| x[0] * x[0]) - 1.0 / nf).abs() < 1e-13);
            assert!((rule.integrate(|x| x[n - 1].powi(4)) - 3.0 / (nf * (nf + 2.0))).abs() < 1e-13);
            assert!((rule.integrate(|x| (x[0] * x[n - 1]).powi(2)) - 1.0 / (nf * (nf + 2.0))).abs() < 1e-13);
            assert!(rule.integrate(|x| x[0].powi(3) * x[1]).abs() < 1e-14);
        }
    }
}
