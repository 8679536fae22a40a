//! Valuation expressions and the bodies they are evaluated on.

use serde::{Deserialize, Serialize};

use crate::bodies::Polytope;
use crate::error::{dim_err, GeoError, Result};
use crate::grassmann::Subspace;
use crate::transforms::GFunction;

/// Even translation-invariant valuation, as a JSON expression tree tagged by `"op"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum ValuationExpr {
    /// `V_k`.
    IntrinsicVolume { k: usize },
    /// `K -> vol_i(Pr_F K)`.
    ProjectionVal { subspace: Subspace },
    /// `K -> int_{Gr_i} f(F) vol_i(Pr_F K) dF`.
    CroftonVal { f: GFunction, i: usize },
    /// Product of `vol(Pr_{F_1} .)` and `vol(Pr_{F_2} .)`: `K -> vol((Pr_{F_1} + Pr_{F_2}) K)`
    /// measured in `F_1 + F_2` taken as an external direct sum.
    ProductProj { first: Subspace, second: Subspace },
    /// Product of two factors of the forms `IntrinsicVolume`, `ProjectionVal`
    /// or `CroftonVal`, averaged over their Crofton measures.
    Product {
        left: Box<ValuationExpr>,
        right: Box<ValuationExpr>,
    },
    /// `(Lambda phi)(K) = d/d eps phi(K + eps D)` at `eps = 0`.
    Lambda { arg: Box<ValuationExpr> },
}

impl ValuationExpr {
    pub fn intrinsic(k: usize) -> Self {
        Self::IntrinsicVolume { k }
    }

    pub fn projection(subspace: Subspace) -> Self {
        Self::ProjectionVal { subspace }
    }

    pub fn crofton(f: GFunction) -> Self {
        let i = f.grass_dim();
        Self::CroftonVal { f, i }
    }

    pub fn product(left: ValuationExpr, right: ValuationExpr) -> Self {
        Self::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn lambda(arg: ValuationExpr) -> Self {
        Self::Lambda { arg: Box::new(arg) }
    }

    /// Degree of homogeneity.
    pub fn degree(&self) -> Result<usize> {
        match self {
            Self::IntrinsicVolume { k } => Ok(*k),
            Self::ProjectionVal { subspace } => Ok(subspace.dim()),
            Self::CroftonVal { f, i } => {
                if f.grass_dim() != *i {
                    return Err(dim_err(format!(
                        "Crofton function lives on Gr_{}, declared i = {i}",
                        f.grass_dim()
                    )));
                }
                Ok(*i)
            }
            Self::ProductProj { first, second } => Ok(first.dim() + second.dim()),
            Self::Product { left, right } => Ok(left.degree()? + right.degree()?),
            Self::Lambda { arg } => {
                let d = arg.degree()?;
                if d == 0 {
                    return Err(GeoError::Invalid("Lambda needs a valuation of degree >= 1".into()));
                }
                Ok(d - 1)
            }
        }
    }

    /// Every representable valuation is even.
    pub fn is_even(&self) -> bool {
        true
    }

    /// Checks dimensions against the ambient space `R^n`.
    pub fn validate(&self, n: usize) -> Result<usize> {
        let same = |s: &Subspace| {
            if s.ambient_dim() == n {
                Ok(())
            } else {
                Err(dim_err(format!("subspace of R^{} used in R^{n}", s.ambient_dim())))
            }
        };
        match self {
            Self::IntrinsicVolume { k } if *k > n => {
                return Err(dim_err(format!("V_{k} in R^{n}")));
            }
            Self::ProjectionVal { subspace } => same(subspace)?,
            Self::CroftonVal { f, .. } if f.ambient_dim() != n => {
                return Err(dim_err(format!("Crofton function on R^{} used in R^{n}", f.ambient_dim())));
            }
            Self::ProductProj { first, second } => {
                same(first)?;
                same(second)?;
            }
            Self::Product { left, right } => {
                left.validate(n)?;
                right.validate(n)?;
            }
            Self::Lambda { arg } => {
                arg.validate(n)?;
            }
            _ => {}
        }
        self.degree()
    }
}

/// A polytope, or the unit ball `D_L` of a subspace `L`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Polytope(Polytope),
    Ball { subspace: Subspace },
}

impl BodySpec {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.ambient_dim(),
            Self::Ball { subspace } => subspace.ambient_dim(),
        }
    }
}

impl From<Polytope> for BodySpec {
    fn from(p: Polytope) -> Self {
        Self::Polytope(p)
    }
}
