use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{dim_err, GeoError, Result};
use crate::grassmann::Subspace;
use crate::sampler::SeededSampler;

use super::hull::{self, affine_dimension, point_scale};
use super::nearest::nearest_point;

/// Convex polytope given by its extreme points.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
    affine_dim: usize,
}

impl Polytope {
    /// Hull of `points`; duplicates and non-extreme points are dropped.
    pub fn new(ambient_dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(GeoError::Invalid("polytope needs at least one point".into()));
        }
        if points.iter().any(|p| p.len() != ambient_dim) {
            return Err(dim_err("vertex length differs from ambient dimension"));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(GeoError::Invalid("non-finite vertex coordinate".into()));
        }
        let vertices = extreme_points(points)?;
        let affine_dim = affine_dimension(&vertices);
        Ok(Self {
            ambient_dim,
            vertices,
            affine_dim,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.ambient_dim
    }

    pub fn volume(&self) -> f64 {
        hull_volume(self)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt());
            }
        }
        d
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.ambient_dim;
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for v in &self.vertices {
            for j in 0..n {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        (lo, hi)
    }

    pub fn translate(&self, x: &[f64]) -> Polytope {
        self.map_vertices(|v| v.iter().zip(x).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, lambda: f64) -> Polytope {
        self.map_vertices(|v| v.iter().map(|a| a * lambda).collect())
    }

    /// `-K`.
    pub fn reflect(&self) -> Polytope {
        self.scale(-1.0)
    }

    /// Image under an invertible linear map.
    pub fn transform(&self, g: &DMatrix<f64>) -> Polytope {
        self.map_vertices(|v| {
            (0..g.nrows())
                .map(|i| (0..v.len()).map(|j| g[(i, j)] * v[j]).sum())
                .collect()
        })
    }

    fn map_vertices(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Polytope {
        let vertices: Vec<Vec<f64>> = self.vertices.iter().map(|v| f(v)).collect();
        let ambient_dim = vertices[0].len();
        let affine_dim = affine_dimension(&vertices);
        Polytope {
            ambient_dim,
            vertices,
            affine_dim,
        }
    }
}

fn extreme_points(points: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    let scale = point_scale(&points);
    let mut unique: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        let dup = unique.iter().any(|q| {
            p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) <= 1e-12 * scale
        });
        if !dup {
            unique.push(p);
        }
    }
    if unique.len() <= 2 {
        return Ok(unique);
    }
    let mut keep = Vec::with_capacity(unique.len());
    for i in 0..unique.len() {
        let others: Vec<Vec<f64>> = unique
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let r = nearest_point(&others, &unique[i])?;
        if r.distance > 1e-9 * scale {
            keep.push(i);
        }
    }
    Ok(keep.into_iter().map(|i| unique[i].clone()).collect())
}

/// Unit cube `[0, side]^n`.
pub fn make_cube(n: usize, side: f64) -> Polytope {
    make_box(&vec![side; n])
}

/// Box `[0, s_1] x ... x [0, s_n]`.
pub fn make_box(sides: &[f64]) -> Polytope {
    let n = sides.len();
    let vertices: Vec<Vec<f64>> = (0..1usize << n)
        .map(|m| (0..n).map(|j| if (m >> j) & 1 == 1 { sides[j] } else { 0.0 }).collect())
        .collect();
    Polytope::new(n, vertices).expect("box vertices are valid")
}

/// Standard simplex `conv(0, e_1, ..., e_n)`.
pub fn make_simplex(n: usize) -> Polytope {
    let mut vertices = vec![vec![0.0; n]];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        vertices.push(e);
    }
    Polytope::new(n, vertices).expect("simplex vertices are valid")
}

/// `conv(+-e_i)`.
pub fn make_crosspolytope(n: usize) -> Polytope {
    let mut vertices = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            vertices.push(e);
        }
    }
    Polytope::new(n, vertices).expect("cross-polytope vertices are valid")
}

/// Hull of `m` uniform random points on the unit sphere of `R^n`.
pub fn make_random_polytope(n: usize, m: usize, s: &mut SeededSampler) -> Result<Polytope> {
    if n == 0 || m < n + 1 {
        return Err(dim_err(format!("need n >= 1 and m >= n + 1, got n = {n}, m = {m}")));
    }
    let points: Vec<Vec<f64>> = (0..m).map(|_| s.unit_vector(n)).collect();
    Polytope::new(n, points)
}

/// Coordinates `Q_E^T v` of the projected vertices, without hull reduction.
pub fn projected_points(p: &Polytope, e: &Subspace) -> Vec<Vec<f64>> {
    p.vertices.iter().map(|v| e.coordinates(v)).collect()
}

/// Orthogonal projection onto `E`, expressed in `E`'s basis coordinates.
pub fn project(p: &Polytope, e: &Subspace) -> Result<Polytope> {
    if p.ambient_dim != e.ambient_dim() {
        return Err(dim_err("polytope and subspace live in different spaces"));
    }
    Polytope::new(e.dim(), projected_points(p, e))
}

/// Exact volume in the ambient dimension; 0 for lower-dimensional polytopes.
pub fn hull_volume(p: &Polytope) -> f64 {
    if p.ambient_dim > 0 && !p.is_full_dimensional() {
        return 0.0;
    }
    hull::hull_volume_points(&p.vertices)
}

/// `P + lambda [0, u]`.
pub fn minkowski_segment(p: &Polytope, u: &[f64], lambda: f64) -> Result<Polytope> {
    if u.len() != p.ambient_dim {
        return Err(dim_err("segment direction has wrong length"));
    }
    if lambda < 0.0 {
        return Err(GeoError::Invalid("segment length must be nonnegative".into()));
    }
    let mut points = p.vertices.clone();
    for v in &p.vertices {
        points.push(v.iter().zip(u).map(|(a, b)| a + lambda * b).collect());
    }
    Polytope::new(p.ambient_dim, points)
}

/// Euclidean distance from `x` to the polytope.
pub fn dist_to_polytope(x: &[f64], p: &Polytope) -> Result<f64> {
    if x.len() != p.ambient_dim {
        return Err(dim_err("point has wrong dimension"));
    }
    Ok(nearest_point(&p.vertices, x)?.distance)
}

/// Mixed finite difference of `vol(P + sum lambda_j [0, u_j])` at zero with
/// step `h` in every direction.
///
/// The volume is affine in each `lambda_j` separately, so the difference is
/// the exact mixed derivative for any `h > 0`.
pub fn segment_mixed_derivative(p: &Polytope, directions: &[Vec<f64>], h: f64) -> Result<f64> {
    let k = directions.len();
    let mut total = 0.0;
    for mask in 0..1usize << k {
        let mut body = p.clone();
        for (j, u) in directions.iter().enumerate() {
            if (mask >> j) & 1 == 1 {
                body = minkowski_segment(&body, u, h)?;
            }
        }
        let sign = if (k - mask.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * hull_volume(&body);
    }
    Ok(total / h.powi(k as i32))
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeRepr {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolytopeRepr::deserialize(deserializer)?;
        Polytope::new(repr.ambient_dim, repr.vertices).map_err(serde::de::Error::custom)
    }
}

/// JSON shape: `{"ambient_dim": n, "vertices": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    ambient_dim: usize,
    vertices: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::haar_subspace;

    #[test]
    fn constructors() {
        let c = make_cube(3, 1.0);
        assert_eq!(c.vertices().len(), 8);
        assert!((c.volume() - 1.0).abs() < 1e-12);
        assert!((make_simplex(2).volume() - 0.5).abs() < 1e-14);
        assert!((make_crosspolytope(3).volume() - 4.0 / 3.0).abs() < 1e-12);
        let mut s = SeededSampler::new(1, 0);
        let r = make_random_polytope(3, 20, &mut s).unwrap();
        for v in r.vertices() {
            assert!(v.iter().map(|x| x * x).sum::<f64>().sqrt() <= 1.0 + 1e-12);
        }
        assert!(make_random_polytope(3, 3, &mut s).is_err());
    }

    #[test]
    fn redundant_points_removed() {
        let mut pts = make_cube(2, 1.0).vertices().to_vec();
        pts.push(vec![0.5, 0.5]);
        pts.push(vec![0.5, 0.0]);
        pts.push(vec![1.0, 1.0]);
        let p = Polytope::new(2, pts).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn projections() {
        let c = make_cube(3, 1.0);
        let full = project(&c, &haar_subspace(3, 3, &mut SeededSampler::new(2, 0)).unwrap()).unwrap();
        assert!((hull_volume(&full) - 1.0).abs() < 1e-12);
        let xy = Subspace::coordinate(3, &[0, 1]).unwrap();
        let sq = project(&c, &xy).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert!((hull_volume(&sq) - 1.0).abs() < 1e-12);
        let diag = Subspace::from_columns(3, &[vec![1.0, 1.0, 1.0]]).unwrap();
        let plane = crate::grassmann::orthocomplement(&diag);
        let hex = project(&c, &plane).unwrap();
        assert_eq!(hex.vertices().len(), 6);
        assert!((hull_volume(&hex) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lower_dimensional_has_zero_volume() {
        let p = Polytope::new(3, vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(p.affine_dim(), 2);
        assert_eq!(hull_volume(&p), 0.0);
    }

    #[test]
    fn segment_sums() {
        let sq = make_cube(2, 1.0);
        assert_eq!(minkowski_segment(&sq, &[1.0, 0.0], 0.0).unwrap(), sq);
        let pt = Polytope::new(2, vec![vec![0.0, 0.0]]).unwrap();
        let seg = minkowski_segment(&pt, &[3.0, 4.0], 2.0).unwrap();
        assert!((seg.diameter() - 10.0).abs() < 1e-12);
        let flat = Polytope::new(3, vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let cube = minkowski_segment(&flat, &[0.0, 0.0, 1.0], 1.0).unwrap();
        assert!((hull_volume(&cube) - 1.0).abs() < 1e-12);
        assert_eq!(cube.vertices().len(), 8);
    }

    #[test]
    fn distances() {
        let c = make_cube(3, 1.0).translate(&[-0.5, -0.5, -0.5]);
        assert!(dist_to_polytope(&[0.1, 0.2, 0.0], &c).unwrap() < 1e-9);
        assert!((dist_to_polytope(&[1.5, 0.0, 0.0], &c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn segment_derivative_is_shadow_volume() {
        let mut s = SeededSampler::new(3, 0);
        let p = make_random_polytope(3, 12, &mut s).unwrap();
        let dir = s.unit_vector(3);
        let line = Subspace::from_columns(3, std::slice::from_ref(&dir)).unwrap();
        let h = crate::grassmann::orthocomplement(&line);
        let shadow = hull_volume(&project(&p, &h).unwrap());
        for step in [1e-3, 0.1, 1.0] {
            let d = segment_mixed_derivative(&p, std::slice::from_ref(&dir), step).unwrap();
            assert!((d - shadow).abs() < 1e-6, "{d} vs {shadow}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = make_simplex(3);
        let js = serde_json::to_string(&c).unwrap();
        assert!(js.contains("\"ambient_dim\":3"));
        let back: Polytope = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
    }
}
