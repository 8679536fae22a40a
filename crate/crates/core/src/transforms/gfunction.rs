//! Functions on Grassmannians represented by evaluators.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{dim_err, GeoError, Result};
use crate::grassmann::{cos_angle, Subspace};

use super::harmonics::{check_scope, HarmonicBasis};

pub type Evaluator = Arc<dyn Fn(&Subspace) -> f64 + Send + Sync>;

/// Closed-form functions that can be written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GFunctionSpec {
    Constant { value: f64 },
    /// `|cos(E, reference)|^power`.
    CosinePower { reference: Subspace, power: f64 },
    /// `u^T A u` for the line spanned by the unit vector `u` (Gr_1 only).
    LineQuadratic { matrix: Vec<Vec<f64>> },
    /// Element `order` of the degree-`degree` block of the even harmonic basis (Gr_1 only).
    EvenHarmonic { degree: usize, order: usize },
}

/// A real function on `Gr_k(R^n)`.
#[derive(Clone)]
pub struct GFunction {
    grass_dim: usize,
    ambient_dim: usize,
    spec: Option<GFunctionSpec>,
    eval: Evaluator,
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GFunction")
            .field("grass_dim", &self.grass_dim)
            .field("ambient_dim", &self.ambient_dim)
            .field("spec", &self.spec)
            .finish()
    }
}

fn line_vector(e: &Subspace) -> Vec<f64> {
    e.basis().column(0).iter().copied().collect()
}

impl GFunction {
    pub fn closed(ambient_dim: usize, grass_dim: usize, spec: GFunctionSpec) -> Result<Self> {
        if grass_dim > ambient_dim {
            return Err(dim_err(format!("Gr_{grass_dim}(R^{ambient_dim}) is empty")));
        }
        let eval: Evaluator = match &spec {
            GFunctionSpec::Constant { value } => {
                let v = *value;
                Arc::new(move |_| v)
            }
            GFunctionSpec::CosinePower { reference, power } => {
                if reference.ambient_dim() != ambient_dim {
                    return Err(dim_err("reference subspace lives in another space"));
                }
                let (r, p) = (reference.clone(), *power);
                Arc::new(move |e| cos_angle(e, &r).map(|c| c.powf(p)).unwrap_or(f64::NAN))
            }
            GFunctionSpec::LineQuadratic { matrix } => {
                if grass_dim != 1 {
                    return Err(dim_err("line quadratics live on Gr_1"));
                }
                if matrix.len() != ambient_dim || matrix.iter().any(|r| r.len() != ambient_dim) {
                    return Err(dim_err("quadratic form has the wrong shape"));
                }
                let a = matrix.clone();
                Arc::new(move |e| {
                    let u = line_vector(e);
                    a.iter()
                        .zip(&u)
                        .map(|(row, ui)| ui * row.iter().zip(&u).map(|(x, y)| x * y).sum::<f64>())
                        .sum()
                })
            }
            GFunctionSpec::EvenHarmonic { degree, order } => {
                if grass_dim != 1 {
                    return Err(dim_err("even harmonics live on Gr_1"));
                }
                check_scope(ambient_dim, *degree)?;
                let basis = HarmonicBasis::new(ambient_dim, *degree)?;
                let (_, start, end) = *basis.blocks().last().unwrap();
                if start + order >= end {
                    return Err(GeoError::Invalid(format!(
                        "degree {degree} has {} harmonics, order {order} requested",
                        end - start
                    )));
                }
                let h = basis.harmonics[start + order].clone();
                Arc::new(move |e| h.eval(&line_vector(e)))
            }
        };
        Ok(Self {
            grass_dim,
            ambient_dim,
            spec: Some(spec),
            eval,
        })
    }

    pub fn constant(ambient_dim: usize, grass_dim: usize, value: f64) -> Self {
        Self::closed(ambient_dim, grass_dim, GFunctionSpec::Constant { value })
            .expect("constant functions are always valid")
    }

    /// Arbitrary evaluator; it must depend on the subspace only, not its basis.
    pub fn custom(
        ambient_dim: usize,
        grass_dim: usize,
        f: impl Fn(&Subspace) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            grass_dim,
            ambient_dim,
            spec: None,
            eval: Arc::new(f),
        }
    }

    pub fn grass_dim(&self) -> usize {
        self.grass_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn spec(&self) -> Option<&GFunctionSpec> {
        self.spec.as_ref()
    }

    pub fn eval(&self, e: &Subspace) -> f64 {
        (self.eval)(e)
    }

    /// [`eval`](Self::eval) with a check that `e` lies in the domain.
    pub fn eval_checked(&self, e: &Subspace) -> Result<f64> {
        if e.ambient_dim() != self.ambient_dim || e.dim() != self.grass_dim {
            return Err(dim_err(format!(
                "function on Gr_{}(R^{}) evaluated at a {}-subspace of R^{}",
                self.grass_dim,
                self.ambient_dim,
                e.dim(),
                e.ambient_dim()
            )));
        }
        Ok(self.eval(e))
    }
}

/// JSON shape: `{"ambient_dim": n, "grass_dim": k, "spec": {"kind": ...}}`.
#[derive(Serialize, Deserialize)]
struct GFunctionRepr {
    ambient_dim: usize,
    grass_dim: usize,
    spec: GFunctionSpec,
}

impl Serialize for GFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let spec = self.spec.clone().ok_or_else(|| {
            serde::ser::Error::custom("custom evaluators cannot be serialized")
        })?;
        GFunctionRepr {
            ambient_dim: self.ambient_dim,
            grass_dim: self.grass_dim,
            spec,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = GFunctionRepr::deserialize(deserializer)?;
        GFunction::closed(r.ambient_dim, r.grass_dim, r.spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::haar_subspace;
    use crate::sampler::SeededSampler;

    #[test]
    fn basis_independent() {
        let mut s = SeededSampler::new(1, 0);
        let f_ref = haar_subspace(4, 2, &mut s).unwrap();
        let fs = vec![
            GFunction::closed(4, 2, GFunctionSpec::CosinePower { reference: f_ref, power: 1.5 }).unwrap(),
            GFunction::constant(4, 2, 2.5),
        ];
        for f in &fs {
            for _ in 0..20 {
                let e = haar_subspace(4, 2, &mut s).unwrap();
                let e2 = e.rebased(&mut s);
                assert!((f.eval(&e) - f.eval(&e2)).abs() < 1e-10);
            }
        }
        let h = GFunction::closed(3, 1, GFunctionSpec::EvenHarmonic { degree: 2, order: 3 }).unwrap();
        let q = GFunction::closed(
            3,
            1,
            GFunctionSpec::LineQuadratic { matrix: vec![vec![1.0, 2.0, 0.0], vec![2.0, 0.0, 0.0], vec![0.0, 0.0, -1.0]] },
        )
        .unwrap();
        for _ in 0..20 {
            let e = haar_subspace(3, 1, &mut s).unwrap();
            let flipped = Subspace::from_columns(3, &[line_vector(&e).iter().map(|v| -v).collect()]).unwrap();
            assert!((h.eval(&e) - h.eval(&flipped)).abs() < 1e-12);
            assert!((q.eval(&e) - q.eval(&flipped)).abs() < 1e-12);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = GFunction::closed(3, 1, GFunctionSpec::EvenHarmonic { degree: 4, order: 2 }).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        let back: GFunction = serde_json::from_str(&js).unwrap();
        let e = Subspace::from_columns(3, &[vec![0.3, -0.4, 0.5]]).unwrap();
        assert_eq!(back.eval(&e), f.eval(&e));
        assert!(serde_json::to_string(&GFunction::custom(3, 1, |_| 0.0)).is_err());
    }

    #[test]
    fn domain_checks() {
        assert!(GFunction::closed(3, 2, GFunctionSpec::EvenHarmonic { degree: 2, order: 0 }).is_err());
        assert!(GFunction::closed(3, 1, GFunctionSpec::EvenHarmonic { degree: 2, order: 5 }).is_err());
        let f = GFunction::constant(3, 1, 1.0);
        assert!(f.eval_checked(&Subspace::full(3)).is_err());
    }
}
