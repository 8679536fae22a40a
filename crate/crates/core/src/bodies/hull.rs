//! Exact volume of the convex hull of a finite point set via a placing
//! (beneath-beyond) triangulation, with the boundary hyperplanes as a by-product.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::special::factorial;

/// Supporting half-space `normal . x <= offset` (unit normal).
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Triangulated hull of a full-dimensional point set.
#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub volume: f64,
    pub facets: Vec<Facet>,
    pub scale: f64,
}

impl Hull {
    /// Largest violation `normal . x - offset` over facets (negative inside).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| dot(&f.normal, x) - f.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets
            .iter()
            .all(|f| dot(&f.normal, x) - f.offset <= tol)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Coordinate spread of the point set (at least 1e-300).
pub(crate) fn point_scale(points: &[Vec<f64>]) -> f64 {
    let d = points.first().map_or(0, Vec::len);
    let mut s: f64 = 0.0;
    for j in 0..d {
        let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p[j]), hi.max(p[j]))
        });
        s = s.max(hi - lo);
    }
    s.max(1e-300)
}

/// Greedily chosen affinely independent points (at most `d + 1`).
fn greedy_simplex(points: &[Vec<f64>], tol: f64) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let d = points[0].len();
    let first = (0..points.len())
        .min_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    let origin = &points[first];
    let mut chosen = vec![first];
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    while chosen.len() <= d {
        let mut best = (0usize, 0.0f64);
        for (i, p) in points.iter().enumerate() {
            let mut r = sub(p, origin);
            for q in &dirs {
                let c = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            let norm = dot(&r, &r).sqrt();
            if norm > best.1 {
                best = (i, norm);
            }
        }
        if best.1 <= tol {
            break;
        }
        let mut r = sub(&points[best.0], origin);
        for _ in 0..2 {
            for q in &dirs {
                let c = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = dot(&r, &r).sqrt();
        dirs.push(r.into_iter().map(|x| x / norm).collect());
        chosen.push(best.0);
    }
    chosen
}

/// Dimension of the affine hull.
pub fn affine_dimension(points: &[Vec<f64>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let tol = 1e-9 * point_scale(points);
    greedy_simplex(points, tol).len() - 1
}

fn det(rows: &[Vec<f64>]) -> f64 {
    let d = rows.len();
    match d {
        0 => 1.0,
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => {
            let (a, b, c) = (&rows[0], &rows[1], &rows[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        }
        _ => DMatrix::from_fn(d, d, |i, j| rows[i][j]).determinant(),
    }
}

fn simplex_volume(points: &[Vec<f64>], idx: &[usize]) -> f64 {
    let base = &points[idx[0]];
    let rows: Vec<Vec<f64>> = idx[1..].iter().map(|&i| sub(&points[i], base)).collect();
    det(&rows).abs() / factorial(rows.len())
}

/// Unit normal of the hyperplane through `d` points in `R^d` (cofactor expansion).
fn hyperplane_normal(points: &[Vec<f64>], idx: &[usize]) -> Vec<f64> {
    let d = points[idx[0]].len();
    let base = &points[idx[0]];
    let rows: Vec<Vec<f64>> = idx[1..].iter().map(|&i| sub(&points[i], base)).collect();
    let mut normal: Vec<f64> = (0..d)
        .map(|j| {
            let minor: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * det(&minor)
        })
        .collect();
    let norm = dot(&normal, &normal).sqrt();
    normal.iter_mut().for_each(|x| *x /= norm);
    normal
}

struct LiveFacet {
    verts: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    alive: bool,
}

fn oriented_facet(points: &[Vec<f64>], verts: Vec<usize>, interior: &[f64]) -> LiveFacet {
    let mut normal = hyperplane_normal(points, &verts);
    let mut offset = dot(&normal, &points[verts[0]]);
    if dot(&normal, interior) - offset > 0.0 {
        normal.iter_mut().for_each(|x| *x = -*x);
        offset = -offset;
    }
    LiveFacet {
        verts,
        normal,
        offset,
        alive: true,
    }
}

/// Convex hull of a point set in `R^d`; `None` when the set is not
/// full-dimensional. `d = 0` yields the one-point space with volume 1.
pub fn convex_hull(points: &[Vec<f64>]) -> Option<Hull> {
    if points.is_empty() {
        return None;
    }
    let d = points[0].len();
    let scale = point_scale(points);
    if d == 0 {
        return Some(Hull {
            dim: 0,
            volume: 1.0,
            facets: Vec::new(),
            scale,
        });
    }
    let tol = 1e-9 * scale;
    if d == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo <= tol {
            return None;
        }
        return Some(Hull {
            dim: 1,
            volume: hi - lo,
            facets: vec![
                Facet {
                    normal: vec![1.0],
                    offset: hi,
                },
                Facet {
                    normal: vec![-1.0],
                    offset: -lo,
                },
            ],
            scale,
        });
    }
    if d == 2 {
        return polygon_hull(points, tol, scale);
    }
    let simplex = greedy_simplex(points, tol);
    if simplex.len() < d + 1 {
        return None;
    }
    let interior: Vec<f64> = (0..d)
        .map(|j| simplex.iter().map(|&i| points[i][j]).sum::<f64>() / (d + 1) as f64)
        .collect();
    let mut volume = simplex_volume(points, &simplex);
    let mut facets: Vec<LiveFacet> = (0..=d)
        .map(|skip| {
            let mut verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, &v)| v)
                .collect();
            verts.sort_unstable();
            oriented_facet(points, verts, &interior)
        })
        .collect();
    let eps = 1e-11 * scale;
    let mut in_simplex = vec![false; points.len()];
    simplex.iter().for_each(|&i| in_simplex[i] = true);
    for p in 0..points.len() {
        if in_simplex[p] {
            continue;
        }
        let x = &points[p];
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && dot(&f.normal, x) - f.offset > eps)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &fi in &visible {
            let f = &facets[fi];
            let mut cone = f.verts.clone();
            cone.push(p);
            volume += simplex_volume(points, &cone);
            for skip in 0..d {
                let ridge: Vec<usize> = f
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        for &fi in &visible {
            facets[fi].alive = false;
        }
        for (ridge, count) in ridges {
            if count == 1 {
                let mut verts = ridge;
                verts.push(p);
                verts.sort_unstable();
                facets.push(oriented_facet(points, verts, &interior));
            }
        }
    }
    Some(Hull {
        dim: d,
        volume,
        facets: facets
            .into_iter()
            .filter(|f| f.alive)
            .map(|f| Facet {
                normal: f.normal,
                offset: f.offset,
            })
            .collect(),
        scale,
    })
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull vertices of a planar point set (Andrew's monotone chain).
pub(crate) fn polygon_vertices(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut pts: Vec<&Vec<f64>> = points.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    if pts.len() < 3 {
        return pts.into_iter().cloned().collect();
    }
    let mut lower: Vec<&Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().cloned().collect()
}

fn polygon_hull(points: &[Vec<f64>], tol: f64, scale: f64) -> Option<Hull> {
    let ring = polygon_vertices(points, tol * scale);
    if ring.len() < 3 {
        return None;
    }
    let m = ring.len();
    let mut area = 0.0;
    let mut facets = Vec::with_capacity(m);
    for i in 0..m {
        let a = &ring[i];
        let b = &ring[(i + 1) % m];
        area += a[0] * b[1] - a[1] * b[0];
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len = (dx * dx + dy * dy).sqrt();
        let normal = vec![dy / len, -dx / len];
        let offset = dot(&normal, a);
        facets.push(Facet { normal, offset });
    }
    let area = 0.5 * area;
    if area <= tol * scale {
        return None;
    }
    Some(Hull {
        dim: 2,
        volume: area,
        facets,
        scale,
    })
}

/// Volume of the hull in the ambient dimension of the points; 0 when not
/// full-dimensional, 1 in dimension 0.
pub fn hull_volume_points(points: &[Vec<f64>]) -> f64 {
    convex_hull(points).map_or(0.0, |h| h.volume)
}

/// Perimeter of the planar hull (twice the length for a segment).
pub fn polygon_perimeter(points: &[Vec<f64>]) -> f64 {
    let scale = point_scale(points);
    let ring = polygon_vertices(points, 1e-12 * scale * scale);
    match ring.len() {
        0 | 1 => 0.0,
        m => (0..m)
            .map(|i| {
                let a = &ring[i];
                let b = &ring[(i + 1) % m];
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
            })
            .sum(),
    }
}
