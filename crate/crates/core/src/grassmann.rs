//! Linear subspaces of `R^n`, Haar sampling on Grassmannians, and the angle
//! functionals `|cos(E,F)|` and `|sin(E,F)|`.
//!
//! Conventions for degenerate dimensions: the zero subspace has an empty
//! basis, `cos(E, F) = 1` whenever the subspace measured in the direct branch
//! is zero-dimensional (empty product of principal cosines).

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{dim_err, GeoError, Result};
use crate::sampler::SeededSampler;
use crate::special::kappa;

/// Singular values below this are treated as zero in rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// A `k`-dimensional linear subspace of `R^n`, stored as an `n x k` matrix
/// with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            basis: DMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            basis: DMatrix::identity(n, n),
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        let mut m = DMatrix::zeros(n, axes.len());
        for (j, &a) in axes.iter().enumerate() {
            if a >= n {
                return Err(dim_err(format!("axis {a} outside R^{n}")));
            }
            m[(a, j)] = 1.0;
        }
        orthonormal_basis(&m)
    }

    /// Span of the given column vectors.
    pub fn from_columns(n: usize, columns: &[Vec<f64>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != n) {
            return Err(dim_err("column length differs from ambient dimension"));
        }
        let m = DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]);
        orthonormal_basis(&m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Largest entry of `basis^T basis - I`.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.dim();
        let g = self.basis.transpose() * &self.basis - DMatrix::<f64>::identity(k, k);
        g.amax()
    }

    /// Same subspace as `other`, tested on projectors.
    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && (self.projector() - other.projector()).amax() <= tol
    }

    /// `other` is contained in `self`.
    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        if self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        let resid = other.basis() - self.projector() * other.basis();
        resid.is_empty() || resid.amax() <= tol
    }

    /// Image under an orthogonal map `g`.
    pub fn rotated(&self, g: &DMatrix<f64>) -> Subspace {
        Subspace {
            basis: g * &self.basis,
        }
    }

    /// Same subspace, different orthonormal basis (`basis * q` for a random
    /// orthogonal `q`).
    pub fn rebased(&self, s: &mut SeededSampler) -> Subspace {
        let k = self.dim();
        if k == 0 {
            return self.clone();
        }
        let q = haar_orthogonal(k, s);
        Subspace {
            basis: &self.basis * q,
        }
    }

    /// Coordinates of `x` in this subspace's basis (`basis^T x`).
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| self.basis.column(j).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Orthonormal basis of the column space of `m`.
///
/// Columns must be linearly independent: a smallest-to-largest singular value
/// ratio below [`RANK_TOL`] is reported as [`GeoError::Rank`].
pub fn orthonormal_basis(m: &DMatrix<f64>) -> Result<Subspace> {
    let (n, k) = m.shape();
    if k == 0 {
        return Ok(Subspace::zero(n));
    }
    if k > n {
        return Err(GeoError::Rank {
            rank: n,
            expected: k,
        });
    }
    let sv = m.singular_values();
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * smax.max(f64::MIN_POSITIVE)).count();
    if smax == 0.0 || rank < k {
        return Err(GeoError::Rank { rank, expected: k });
    }
    Ok(Subspace {
        basis: sign_fixed_q(m.clone()),
    })
}

/// Thin `Q` of a QR decomposition with the diagonal of `R` made positive.
fn sign_fixed_q(m: DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Haar-distributed orthogonal `n x n` matrix.
pub fn haar_orthogonal(n: usize, s: &mut SeededSampler) -> DMatrix<f64> {
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let g = DMatrix::from_fn(n, n, |_, _| s.normal());
    sign_fixed_q(g)
}

/// Haar-random `k`-subspace of `R^n`: orthonormalized `n x k` standard Gaussian
/// matrix with sign-fixed QR.
pub fn haar_subspace(n: usize, k: usize, s: &mut SeededSampler) -> Result<Subspace> {
    if k > n {
        return Err(dim_err(format!("cannot sample a {k}-subspace of R^{n}")));
    }
    if k == 0 {
        return Ok(Subspace::zero(n));
    }
    let g = DMatrix::from_fn(n, k, |_, _| s.normal());
    Ok(Subspace {
        basis: sign_fixed_q(g),
    })
}

pub fn orthocomplement(e: &Subspace) -> Subspace {
    let n = e.ambient_dim();
    let k = e.dim();
    if k == 0 {
        return Subspace::full(n);
    }
    if k == n {
        return Subspace::zero(n);
    }
    let comp = DMatrix::<f64>::identity(n, n) - e.projector();
    let eig = comp.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<_> = idx[..n - k]
        .iter()
        .map(|&j| eig.eigenvectors.column(j).into_owned())
        .collect();
    let m = DMatrix::from_columns(&cols);
    // One Gram-Schmidt pass removes residual leakage into E.
    let m = &m - e.projector() * &m;
    Subspace {
        basis: sign_fixed_q(m),
    }
}

fn check_same_ambient(e: &Subspace, f: &Subspace) -> Result<()> {
    if e.ambient_dim() != f.ambient_dim() {
        return Err(dim_err(format!(
            "ambient dimensions differ: {} vs {}",
            e.ambient_dim(),
            f.ambient_dim()
        )));
    }
    Ok(())
}

/// `E + F`, with dimension found from the numerical rank of `[Q_E | Q_F]`.
pub fn span_sum(e: &Subspace, f: &Subspace) -> Result<Subspace> {
    check_same_ambient(e, f)?;
    let n = e.ambient_dim();
    let (ke, kf) = (e.dim(), f.dim());
    if ke + kf == 0 {
        return Ok(Subspace::zero(n));
    }
    let mut m = DMatrix::zeros(n, ke + kf);
    m.columns_mut(0, ke).copy_from(e.basis());
    m.columns_mut(ke, kf).copy_from(f.basis());
    let svd = m.svd(true, false);
    let u = svd.u.expect("u requested");
    let cols: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > RANK_TOL)
        .map(|(j, _)| u.column(j).into_owned())
        .collect();
    if cols.is_empty() {
        return Ok(Subspace::zero(n));
    }
    Ok(Subspace {
        basis: sign_fixed_q(DMatrix::from_columns(&cols)),
    })
}

/// Cosines of the principal angles between `E` and `F` (`min(dim)` values):
/// singular values of `Q_F^T Q_E`.
pub fn principal_cosines(e: &Subspace, f: &Subspace) -> Result<Vec<f64>> {
    check_same_ambient(e, f)?;
    if e.dim() == 0 || f.dim() == 0 {
        return Ok(Vec::new());
    }
    let m = f.basis().transpose() * e.basis();
    Ok(m.singular_values().iter().map(|s| s.min(1.0)).collect())
}

/// Product of principal cosines, for `dim E <= dim F`.
fn direct_cos(e: &Subspace, f: &Subspace) -> f64 {
    if e.dim() == 0 {
        return 1.0;
    }
    let m = f.basis().transpose() * e.basis();
    m.singular_values().iter().product::<f64>().clamp(0.0, 1.0)
}

/// `|cos(E, F)|`: the factor by which orthogonal projection onto `F` scales
/// `dim E`-volumes in `E` when `dim E <= dim F`; otherwise the same quantity
/// for the orthogonal complements.
pub fn cos_angle(e: &Subspace, f: &Subspace) -> Result<f64> {
    check_same_ambient(e, f)?;
    if e.dim() <= f.dim() {
        Ok(direct_cos(e, f))
    } else {
        Ok(direct_cos(&orthocomplement(e), &orthocomplement(f)))
    }
}

/// `|sin(E, F)| = |cos(E, F^perp)|`.
pub fn sin_angle(e: &Subspace, f: &Subspace) -> Result<f64> {
    check_same_ambient(e, f)?;
    cos_angle(e, &orthocomplement(f))
}

/// `H + W` with `W` a Haar-random `(i - dim H)`-subspace of `H^perp`.
pub fn sample_containing(h: &Subspace, i: usize, s: &mut SeededSampler) -> Result<Subspace> {
    let n = h.ambient_dim();
    let kh = h.dim();
    if i <= kh || i > n {
        return Err(dim_err(format!(
            "need dim H < i <= n, got dim H = {kh}, i = {i}, n = {n}"
        )));
    }
    let comp = orthocomplement(h);
    let w = haar_subspace(n - kh, i - kh, s)?;
    let mut basis = DMatrix::zeros(n, i);
    basis.columns_mut(0, kh).copy_from(h.basis());
    basis
        .columns_mut(kh, i - kh)
        .copy_from(&(comp.basis() * w.basis()));
    Ok(Subspace { basis })
}

/// Haar-random `i`-subspace of `H`.
pub fn sample_within(h: &Subspace, i: usize, s: &mut SeededSampler) -> Result<Subspace> {
    let kh = h.dim();
    if i >= kh {
        return Err(dim_err(format!("need i < dim H, got i = {i}, dim H = {kh}")));
    }
    let w = haar_subspace(kh, i, s)?;
    Ok(Subspace {
        basis: h.basis() * w.basis(),
    })
}

/// `vol_d(A(D_L))` for `d = dim L`: `kappa_d` times the product of the singular
/// values of `A` restricted to `L`.
pub fn ellipsoid_image_volume(a: &DMatrix<f64>, l: &Subspace) -> Result<f64> {
    if a.ncols() != l.ambient_dim() {
        return Err(dim_err("map domain differs from ambient dimension of L"));
    }
    if l.dim() > a.nrows() {
        return Err(dim_err(format!(
            "dim L = {} exceeds target dimension {}",
            l.dim(),
            a.nrows()
        )));
    }
    Ok(ellipsoid_shadow_volume(a, l, l.dim()))
}

/// `vol_m(A(D_L))` measured in dimension `m`. The image is an ellipsoid whose
/// semi-axes are the singular values of `A Q_L`; it has zero `m`-volume when
/// `m` exceeds its dimension.
pub fn ellipsoid_shadow_volume(a: &DMatrix<f64>, l: &Subspace, m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    if m > l.dim() || m > a.nrows() {
        return 0.0;
    }
    let img = a * l.basis();
    let mut sv: Vec<f64> = img.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    kappa(m) * sv[..m].iter().product::<f64>()
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient_dim(),
            basis: (0..self.dim())
                .map(|j| self.basis.column(j).iter().copied().collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(deserializer)?;
        Subspace::from_columns(repr.ambient_dim, &repr.basis).map_err(serde::de::Error::custom)
    }
}

/// JSON shape: `{"ambient_dim": n, "basis": [[column], ...]}`.
#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<Vec<f64>>,
}
