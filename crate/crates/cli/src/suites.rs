//! The verification suites. Each suite turns one family of identities into
//! report records; numerical failures become failed records, not errors.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use valgeo::bodies::hull::convex_hull;
use valgeo::bodies::*;
use valgeo::grassmann::*;
use valgeo::special::{binomial, gauss_legendre_on, kappa, legendre_n};
use valgeo::transforms::{funk_hecke_cosine_eigen, lefschetz_probe, GFunction, GFunctionSpec};
use valgeo::valuations::*;
use valgeo::SeededSampler;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Record, Series, SuiteReport};

pub const SUITES: [&str; 9] = [
    "angles", "kubota", "steiner", "claim23", "lemma22", "lemma24", "lefschetz", "hadwiger", "lambda",
];

/// Runs the named suite. Unknown names and invalid configurations are errors.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = SuiteReport::new(name, cfg.seed);
    match name {
        "angles" => angles(cfg, &mut report)?,
        "kubota" => kubota(cfg, &mut report)?,
        "steiner" => steiner(cfg, &mut report)?,
        "claim23" => claim23(cfg, &mut report)?,
        "lemma22" => lemma22(cfg, &mut report)?,
        "lemma24" => lemma24(cfg, &mut report)?,
        "lefschetz" => lefschetz(cfg, &mut report)?,
        "hadwiger" => hadwiger(cfg, &mut report)?,
        "lambda" => lambda(cfg, &mut report)?,
        _ => {
            return Err(CliError::Usage(format!(
                "unknown suite `{name}`, expected one of: {}",
                SUITES.join(", ")
            )))
        }
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

fn sampler(cfg: &RunConfig, stream: u64) -> SeededSampler {
    SeededSampler::new(cfg.seed, stream)
}

fn require_dims(dims: &[usize], min: usize, suite: &str) -> Result<(), CliError> {
    match dims.iter().find(|&&n| n < min) {
        Some(n) => Err(CliError::Config(format!("{suite} needs dimensions >= {min}, got {n}"))),
        None => Ok(()),
    }
}

/// Stratified jittered estimate of the volume of `{x in [lo, hi] : member(x)}`.
/// Sample `i` lies in stratum `i mod m^d`.
pub fn stratified_volume(
    lo: &[f64],
    hi: &[f64],
    samples: usize,
    s: &mut SeededSampler,
    member: impl Fn(&[f64]) -> bool,
) -> f64 {
    let d = lo.len();
    let mut m = (samples as f64).powf(1.0 / d as f64).floor() as usize;
    while (m + 1).pow(d as u32) <= samples {
        m += 1;
    }
    let m = m.max(1);
    let strata = m.pow(d as u32);
    let mut hits = vec![0usize; strata];
    let mut counts = vec![0usize; strata];
    let mut x = vec![0.0; d];
    for i in 0..samples {
        let mut c = i % strata;
        for (a, xa) in x.iter_mut().enumerate() {
            let cell = c % m;
            c /= m;
            *xa = lo[a] + (hi[a] - lo[a]) * (cell as f64 + s.uniform()) / m as f64;
        }
        counts[i % strata] += 1;
        if member(&x) {
            hits[i % strata] += 1;
        }
    }
    let box_volume: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let frac: f64 = hits.iter().zip(&counts).map(|(&h, &c)| h as f64 / c as f64).sum::<f64>() / strata as f64;
    box_volume * frac
}

fn bounding_box(points: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let d = points[0].len();
    let lo = (0..d).map(|a| points.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min)).collect();
    let hi = (0..d).map(|a| points.iter().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max)).collect();
    (lo, hi)
}

/// Monte-Carlo volume of the convex hull of full-dimensional `points`, by
/// membership in its facet inequalities; zero for flat point sets.
fn mc_hull_volume(points: &[Vec<f64>], samples: usize, s: &mut SeededSampler) -> f64 {
    match convex_hull(points) {
        None => 0.0,
        Some(h) => {
            let (lo, hi) = bounding_box(points);
            stratified_volume(&lo, &hi, samples, s, |x| h.contains(x, 0.0))
        }
    }
}

/// `vol(Pr_F A) / vol(A)` for a random polytope `A` in `E`, `dim E <= dim F`,
/// both volumes by Monte Carlo.
fn volume_ratio(e: &Subspace, f: &Subspace, samples: usize, s: &mut SeededSampler) -> f64 {
    let d = e.dim();
    let a: Vec<Vec<f64>> = (0..4 * d + 4).map(|_| s.normal_vec(d)).collect();
    let m: DMatrix<f64> = f.basis().transpose() * e.basis();
    let u = m.clone().svd(true, false).u.expect("requested");
    let reduce: DMatrix<f64> = u.columns(0, d).transpose() * &m;
    let image: Vec<Vec<f64>> = a
        .iter()
        .map(|p| (&reduce * nalgebra::DVector::from_column_slice(p)).iter().copied().collect())
        .collect();
    let va = mc_hull_volume(&a, samples, s);
    let vp = mc_hull_volume(&image, samples, s);
    vp / va
}

/// The pair on which the volume-ratio definition is checked: `(E, F)` or
/// `(E^perp, F^perp)` per the definition, swapped by symmetry when that gives
/// a smaller polytope dimension.
fn definition_pair(e: &Subspace, f: &Subspace) -> (Subspace, Subspace) {
    let (i, j) = (e.dim(), f.dim());
    let n = e.ambient_dim();
    if i <= j {
        if n - j < i {
            (orthocomplement(f), orthocomplement(e))
        } else {
            (e.clone(), f.clone())
        }
    } else if j < n - i {
        (f.clone(), e.clone())
    } else {
        (orthocomplement(e), orthocomplement(f))
    }
}

fn angles(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    const PAIRS: usize = 100;
    let dims = cfg.dims_or(&[3, 4, 5, 6]);
    require_dims(&dims, 1, "angles")?;
    let samples = cfg.samples_or(10_000);
    let tol_sym = cfg.tolerance("angles.symmetry", 1e-10);
    let tol_def = cfg.tolerance("angles.definition", 0.01);
    let mut errors = Series::new("angle_definition_error", &["n", "i", "j", "max_abs_error"]);
    for &n in &dims {
        for i in 0..=n {
            for j in 0..=n {
                let mut s = sampler(cfg, ((n * 64 + i) * 64 + j) as u64);
                let (mut dev_cos, mut dev_sin, mut dev_branch, mut dev_def) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
                let mut out_of_range = 0usize;
                let check_def = (1..n).contains(&i) && (1..n).contains(&j);
                for _ in 0..PAIRS {
                    let e = haar_subspace(n, i, &mut s)?;
                    let f = haar_subspace(n, j, &mut s)?;
                    let (ep, fp) = (orthocomplement(&e), orthocomplement(&f));
                    let c = cos_angle(&e, &f)?;
                    let sn = sin_angle(&e, &f)?;
                    out_of_range += usize::from(!(0.0..=1.0).contains(&c)) + usize::from(!(0.0..=1.0).contains(&sn));
                    dev_cos = dev_cos
                        .max((c - cos_angle(&f, &e)?).abs())
                        .max((c - cos_angle(&ep, &fp)?).abs());
                    dev_sin = dev_sin
                        .max((sn - sin_angle(&f, &e)?).abs())
                        .max((sn - sin_angle(&ep, &fp)?).abs());
                    if i == j {
                        let direct: f64 = principal_cosines(&e, &f)?.iter().product();
                        let via: f64 = principal_cosines(&ep, &fp)?.iter().product();
                        dev_branch = dev_branch.max((direct.abs() - via.abs()).abs());
                    }
                    if check_def {
                        let (a, b) = definition_pair(&e, &f);
                        dev_def = dev_def.max((volume_ratio(&a, &b, samples, &mut s) - c).abs());
                    }
                }
                let tag = format!("n={n} i={i} j={j}");
                report.push(Record::at_most(format!("cos symmetry {tag}"), dev_cos, tol_sym));
                report.push(Record::at_most(format!("sin symmetry {tag}"), dev_sin, tol_sym));
                report.push(Record::at_most(format!("range {tag}"), out_of_range as f64, 0.0));
                if i == j {
                    report.push(Record::at_most(format!("equal-dimension branches {tag}"), dev_branch, tol_sym));
                }
                if check_def {
                    report.push(Record::at_most(format!("volume ratio definition {tag}"), dev_def, tol_def));
                    errors.push(vec![n as f64, i as f64, j as f64, dev_def]);
                }
            }
        }
    }
    report.series.push(errors);
    Ok(())
}

fn kubota(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    let dims = cfg.dims_or(&[3, 4]);
    require_dims(&dims, 2, "kubota")?;
    let samples = cfg.samples_or(100_000);
    let tol = cfg.tolerance("kubota", 0.02);
    let tol_rate = cfg.tolerance("kubota.rate", 0.25);
    let mut s = sampler(cfg, 1);
    for &n in &dims {
        let cube = make_cube(n, 1.0);
        let ball = Ball { n, radius: 1.0 };
        for k in 1..n {
            match kubota_estimate(&cube, k, samples, &mut s) {
                Ok(v) => report.push(Record::rel(format!("cube n={n} V{k}"), binomial(n, k), v.mean, tol)),
                Err(e) => report.push(Record::failed(format!("cube n={n} V{k}"), tol, e)),
            }
            let want = binomial(n, k) * kappa(n) / kappa(n - k);
            match kubota_estimate(&ball, k, samples, &mut s) {
                Ok(v) => report.push(Record::rel(format!("ball n={n} V{k}"), want, v.mean, tol)),
                Err(e) => report.push(Record::failed(format!("ball n={n} V{k}"), tol, e)),
            }
        }
    }
    // error against sample count for V_1 of the cube
    let n = dims[0];
    let cube = make_cube(n, 1.0);
    let mut table = Series::new("kubota_convergence", &["samples", "estimate", "std_err", "abs_error"]);
    let budgets: Vec<usize> = (0..4).map(|p| (samples >> (2 * (3 - p))).max(16)).collect();
    let mut errs = Vec::new();
    for (b, &m) in budgets.iter().enumerate() {
        let v = kubota_estimate(&cube, 1, m, &mut sampler(cfg, 100 + b as u64))?;
        table.push(vec![m as f64, v.mean, v.std_err, (v.mean - n as f64).abs()]);
        errs.push(v.std_err);
    }
    for w in errs.windows(2) {
        report.push(Record::rel("std_err ratio per 4x samples", 2.0, w[0] / w[1], tol_rate));
    }
    report.series.push(table);
    Ok(())
}

/// `V_j` of the standard simplex `conv(0, e_1, ..., e_n)` for `n = 2, 3`.
pub fn simplex_intrinsic_volumes(n: usize) -> Option<Vec<f64>> {
    match n {
        1 => Some(vec![1.0, 1.0]),
        2 => Some(vec![1.0, (2.0 + 2f64.sqrt()) / 2.0, 0.5]),
        3 => {
            // mean width from edge lengths and exterior dihedral angles
            let v1 = (3.0 * PI / 2.0 + 3.0 * 2f64.sqrt() * (PI - (1.0 / 3f64.sqrt()).acos())) / (2.0 * PI);
            let v2 = (1.5 + 3f64.sqrt() / 2.0) / 2.0;
            Some(vec![1.0, v1, v2, 1.0 / 6.0])
        }
        _ => None,
    }
}

fn steiner(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    let dims = cfg.dims_or(&[2, 3]);
    require_dims(&dims, 2, "steiner")?;
    let samples = cfg.samples_or(2_000_000);
    let tol = cfg.tolerance("steiner", 0.02);
    let tol_seg = cfg.tolerance("segment", 1e-6);
    let mut coeffs = Series::new("steiner_coefficients", &["n", "body", "power", "fitted", "std_err", "oracle"]);
    for &n in &dims {
        let mut bodies = vec![("cube", make_cube(n, 1.0), box_intrinsic_volumes(&vec![1.0; n])?.values)];
        if let Some(v) = simplex_intrinsic_volumes(n) {
            bodies.push(("simplex", make_simplex(n), v));
        }
        for (b, (name, p, oracle)) in bodies.iter().enumerate() {
            let fit = steiner_fit(p, &default_grid(p), samples, &mut sampler(cfg, (10 * n + b) as u64));
            for m in 0..=n {
                let want = kappa(m) * oracle[n - m];
                let label = format!("{name} n={n} eps^{m} coefficient");
                match &fit {
                    Ok(fit) => {
                        report.push(Record::rel(label, want, fit.coefficients[m], tol));
                        coeffs.push(vec![n as f64, b as f64, m as f64, fit.coefficients[m], fit.std_errors[m], want]);
                    }
                    Err(e) => report.push(Record::failed(label, tol, e)),
                }
            }
        }
        // d/dt vol(K + t[0,u]) = vol_{n-1}(Pr_{u^perp} K), and the mixed second derivative
        let mut s = sampler(cfg, 1000 + n as u64);
        let shapes = [
            ("cube", make_cube(n, 1.0)),
            ("simplex", make_simplex(n)),
            ("random", make_random_polytope(n, 2 * n + 4, &mut s)?),
        ];
        for (name, p) in &shapes {
            for t in 0..3 {
                let u = s.unit_vector(n);
                let line = Subspace::from_columns(n, std::slice::from_ref(&u))?;
                let lhs = segment_mixed_derivative(p, std::slice::from_ref(&u), 0.5)?;
                let rhs = hull_volume(&project(p, &orthocomplement(&line))?);
                report.push(Record::rel(format!("segment derivative {name} n={n} #{t}"), rhs, lhs, tol_seg));
                if n >= 3 {
                    let v = s.unit_vector(n);
                    let plane = Subspace::from_columns(n, &[u.clone(), v.clone()])?;
                    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    let lhs = segment_mixed_derivative(p, &[u, v], 0.5)?;
                    let rhs = (1.0 - dot * dot).sqrt() * hull_volume(&project(p, &orthocomplement(&plane))?);
                    report.push(Record::rel(format!("two-segment derivative {name} n={n} #{t}"), rhs, lhs, tol_seg));
                }
            }
        }
    }
    report.series.push(coeffs);
    Ok(())
}

fn claim23(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    const TRIPLES: usize = 100;
    let dims = cfg.dims_or(&[5, 6]);
    require_dims(&dims, 2, "claim23")?;
    let tol = cfg.tolerance("claim23", 1e-9);
    for &n in &dims {
        let mut s = sampler(cfg, n as u64);
        for t in 0..TRIPLES {
            let a = 1 + (s.next_u64() % (n as u64 - 1)) as usize;
            let b = 1 + (s.next_u64() % (n - a) as u64) as usize;
            let e = haar_subspace(n, a, &mut s)?;
            let f = haar_subspace(n, b, &mut s)?;
            let l = haar_subspace(n, a + b, &mut s)?;
            let name = format!("n={n} #{t:03} dim E={a} dim F={b}");
            match claim23_check(&e, &f, &l) {
                Ok(c) if c.degenerate => report.push(Record::rel(name, c.rhs, c.lhs, tol).with_note("degenerate")),
                Ok(c) => report.push(Record::rel(name, c.rhs, c.lhs, tol)),
                Err(err) => report.push(Record::failed(name, tol, err)),
            }
        }
    }
    Ok(())
}

/// `vol` of `T(C)` for the unit cube `C` and invertible `T`, by stratified
/// sampling of a box around `T(C)` with membership `T^{-1} y in C`. The box is
/// aligned with the left singular vectors of `T`.
fn linear_image_volume_oracle(t: &DMatrix<f64>, samples: usize, s: &mut SeededSampler) -> Option<f64> {
    let n = t.nrows();
    let inv = t.clone().try_inverse()?;
    let u = t.clone().svd(true, false).u?;
    let corners: Vec<Vec<f64>> = (0..1usize << n)
        .map(|mask| {
            let x = nalgebra::DVector::from_fn(n, |a, _| ((mask >> a) & 1) as f64);
            (u.transpose() * t * x).iter().copied().collect()
        })
        .collect();
    let (lo, hi) = bounding_box(&corners);
    Some(stratified_volume(&lo, &hi, samples, s, |z| {
        let x = &inv * (&u * nalgebra::DVector::from_column_slice(z));
        x.iter().all(|v| (0.0..=1.0).contains(v))
    }))
}

fn lemma22(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    const POINTS: usize = 20;
    let n = cfg.dims_or(&[4])[0];
    require_dims(&[n], 3, "lemma22")?;
    let samples = cfg.samples_or(100_000);
    let tol = cfg.tolerance("lemma22", 0.03);
    let tol_prop = cfg.tolerance("prop13", 0.02);
    let (i, k) = (1, 1);
    let mut s = sampler(cfg, 1);
    let f = haar_subspace(n, i, &mut s)?;
    let direct_expr = ValuationExpr::product(ValuationExpr::intrinsic(k), ValuationExpr::projection(f.clone()));
    let mut points = Series::new("lemma22_points", &["direct", "formula", "direct_std_err", "formula_std_err"]);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut failure = None;
    for _ in 0..POINTS {
        let l = haar_subspace(n, k + i, &mut s)?;
        let body = BodySpec::Ball { subspace: l.clone() };
        let d = evaluate(&direct_expr, &body, Budget::new(samples), &mut s);
        let r = lemma22_formula(&f, k, &l, samples, &mut s);
        match (d, r) {
            (Ok(d), Ok(r)) => {
                points.push(vec![d.mean, r.mean, d.std_err, r.std_err]);
                a.push(d.mean);
                b.push(r.mean);
            }
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        }
    }
    match failure {
        Some(e) => report.push(Record::failed("lemma22 fitted-scalar residual", tol, e)),
        None => {
            let fit = fit_scalar(&a, &b);
            report.push(
                Record::at_most("lemma22 fitted-scalar residual", fit.residual, tol)
                    .with_note(format!("scalar {:.6}", fit.scalar)),
            );
        }
    }
    report.series.push(points);

    // product of projection valuations on the cube
    let cube = make_cube(4, 1.0);
    let v = product_projection(&Subspace::coordinate(4, &[0, 1])?, &Subspace::coordinate(4, &[2, 3])?, &cube)?;
    report.push(Record::abs("prop13 complementary coordinate planes", 1.0, v, 1e-12));
    let mut s = sampler(cfg, 2);
    for t in 0..5 {
        let f1 = haar_subspace(4, 2, &mut s)?;
        let f2 = haar_subspace(4, 2, &mut s)?;
        let observed = product_projection(&f1, &f2, &cube)?;
        let mut m = DMatrix::zeros(4, 4);
        m.rows_mut(0, 2).copy_from(&f1.basis().transpose());
        m.rows_mut(2, 2).copy_from(&f2.basis().transpose());
        let name = format!("prop13 rotated planes #{t}");
        match linear_image_volume_oracle(&m, samples, &mut s) {
            Some(oracle) => report.push(Record::rel(name, oracle, observed, tol_prop)),
            None => report.push(Record::failed(name, tol_prop, "singular projection pair")),
        }
    }
    Ok(())
}

fn lemma24(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    const POINTS: usize = 20;
    let n = cfg.dims_or(&[4])[0];
    require_dims(&[n], 3, "lemma24")?;
    let samples = cfg.samples_or(100_000);
    let tol = cfg.tolerance("lemma24", 0.03);
    let (i, k) = (1, 1);
    let mut s = sampler(cfg, 1);
    let reference = haar_subspace(n, i, &mut s)?;
    let g = GFunction::closed(n, i, GFunctionSpec::CosinePower { reference, power: 4.0 })?;
    let direct_expr = ValuationExpr::product(ValuationExpr::intrinsic(k), ValuationExpr::crofton(g.clone()));
    let mut points = Series::new("lemma24_points", &["direct", "formula", "direct_std_err", "formula_std_err"]);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut failure = None;
    for _ in 0..POINTS {
        let l = haar_subspace(n, k + i, &mut s)?;
        let body = BodySpec::Ball { subspace: l.clone() };
        match evaluate(&direct_expr, &body, Budget::new(samples), &mut s) {
            Ok(d) => {
                let r = multiply_eval(&g, k + i, &l, samples, 1, &mut s);
                points.push(vec![d.mean, r.mean, d.std_err, r.std_err]);
                a.push(d.mean);
                b.push(r.mean);
            }
            Err(e) => failure = Some(e),
        }
    }
    match failure {
        Some(e) => report.push(Record::failed("lemma24 fitted-scalar residual", tol, e)),
        None => {
            let fit = fit_scalar(&a, &b);
            report.push(
                Record::at_most("lemma24 fitted-scalar residual", fit.residual, tol)
                    .with_note(format!("scalar {:.6}", fit.scalar)),
            );
        }
    }
    report.series.push(points);
    Ok(())
}

/// `int_{-1}^{1} |t| P_d(t) dt / 2` by Gauss–Legendre on `[0, 1]`.
pub fn legendre_cosine_moment(d: usize) -> f64 {
    let (x, w) = gauss_legendre_on(32, 0.0, 1.0);
    x.iter().zip(&w).map(|(t, w)| w * t * legendre_n(3, d, *t)).sum()
}

fn lefschetz(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    let n = cfg.dims_or(&[3])[0];
    let d_max = cfg.dmax.unwrap_or(8);
    let samples = cfg.samples_or(20_000);
    let tol_leak = cfg.tolerance("leakage", 1e-2);
    let sigmas = cfg.tolerance("lefschetz.sigma", 3.0);
    for d in [0, 2] {
        let want = if d == 0 { 0.5 } else { 0.125 };
        let name = format!("cosine eigenvalue n=3 d={d}");
        match funk_hecke_cosine_eigen(3, d) {
            Ok(v) => {
                report.push(Record::abs(name.clone(), want, v, 1e-6));
                report.push(Record::abs(format!("{name} vs Legendre quadrature"), legendre_cosine_moment(d), v, 1e-6));
            }
            Err(e) => report.push(Record::failed(name, 1e-6, e)),
        }
    }
    let (spec, op) = match lefschetz_probe(n, 1, d_max, samples, &mut sampler(cfg, 1)) {
        Ok(r) => r,
        Err(valgeo::GeoError::Scope(msg)) | Err(valgeo::GeoError::Invalid(msg)) => {
            return Err(CliError::Config(msg))
        }
        Err(e) => {
            report.push(Record::failed("lefschetz probe", tol_leak, e));
            return Ok(());
        }
    };
    let mut curve = Series::new(
        "eigenvalue_vs_degree",
        &["degree", "scalar", "std_err", "cosine_eigen", "radon_eigen", "predicted"],
    );
    for d in &spec.degrees {
        let allowance = sigmas * d.std_err + 1e-12;
        report.push(Record::at_least(format!("degree {} scalar nonzero", d.degree), d.scalar.abs(), allowance));
        report.push(Record::abs(format!("degree {} scalar vs eigenvalue product", d.degree), d.predicted, d.scalar, allowance));
        curve.push(vec![d.degree as f64, d.scalar, d.std_err, d.cosine_eigen, d.radon_eigen, d.predicted]);
    }
    report.push(Record::at_most("off-diagonal leakage", op.leakage(), tol_leak));
    report.push(
        Record::at_least("smallest singular value", spec.smallest_singular_value, spec.floor)
            .with_note(format!("entry std_err {:.3e}", spec.entry_std_err)),
    );
    let mut sv = Series::new("operator_singular_values", &["index", "value"]);
    for (j, v) in spec.singular_values.iter().enumerate() {
        sv.push(vec![j as f64, *v]);
    }
    report.series.push(curve);
    report.series.push(sv);
    Ok(())
}

fn test_bodies(n: usize, s: &mut SeededSampler) -> Result<Vec<Polytope>, CliError> {
    Ok(vec![make_cube(n, 1.0), make_simplex(n), make_random_polytope(n, 20, s)?])
}

#[allow(clippy::too_many_arguments)]
fn proportional(
    name: &str,
    a: &ValuationExpr,
    b: &ValuationExpr,
    bodies: &[Polytope],
    samples: usize,
    tol: f64,
    s: &mut SeededSampler,
    report: &mut SuiteReport,
    series: &mut Series,
) {
    match proportionality_check(a, b, bodies, Budget::new(samples), tol, s) {
        Ok(r) => {
            for (j, ratio) in r.ratios.iter().enumerate() {
                series.push(vec![
                    report.records.len() as f64,
                    j as f64,
                    r.values_a[j].mean,
                    r.values_b[j].mean,
                    ratio.unwrap_or(f64::NAN),
                ]);
            }
            let rec = Record::at_most(format!("{name} ratio spread"), r.spread, tol);
            report.push(if r.warnings.is_empty() { rec } else { rec.with_note(r.warnings.join("; ")) });
        }
        Err(e) => report.push(Record::failed(format!("{name} ratio spread"), tol, e)),
    }
}

fn ratio_series(name: &str) -> Series {
    Series::new(name, &["check", "body", "value_a", "value_b", "ratio"])
}

fn hadwiger(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    let dims = cfg.dims_or(&[3]);
    require_dims(&dims, 2, "hadwiger")?;
    let samples = cfg.samples_or(100_000);
    let tol = cfg.tolerance("hadwiger", 0.03);
    let mut series = ratio_series("hadwiger_ratios");
    for &n in &dims {
        let mut s = sampler(cfg, n as u64);
        let bodies = test_bodies(n, &mut s)?;
        let v1 = ValuationExpr::intrinsic(1);
        let square = ValuationExpr::product(v1.clone(), v1);
        proportional(&format!("V1^2 / V2 n={n}"), &square, &ValuationExpr::intrinsic(2), &bodies, samples, tol, &mut s, report, &mut series);
    }
    report.series.push(series);
    Ok(())
}

fn lambda(cfg: &RunConfig, report: &mut SuiteReport) -> Result<(), CliError> {
    let dims = cfg.dims_or(&[3]);
    require_dims(&dims, 2, "lambda")?;
    let samples = cfg.samples_or(1_000_000);
    let tol = cfg.tolerance("lambda", 0.03);
    let mut series = ratio_series("lambda_ratios");
    for &n in &dims {
        let mut s = sampler(cfg, n as u64);
        let bodies = test_bodies(n, &mut s)?;
        for k in 2..=n {
            let a = ValuationExpr::lambda(ValuationExpr::intrinsic(k));
            let b = ValuationExpr::intrinsic(k - 1);
            proportional(&format!("Lambda V{k} / V{} n={n}", k - 1), &a, &b, &bodies, samples, tol, &mut s, report, &mut series);
        }
        let cube = make_cube(n, 1.0);
        let grid = default_lambda_grid(&cube, n);
        let name = format!("Lambda vol on the unit cube n={n}");
        match lambda_apply(&ValuationExpr::intrinsic(n), &cube, &grid, Budget::new(samples), &mut s) {
            Ok(r) => report.push(
                Record::rel(name, 2.0 * n as f64, r.value.mean, tol)
                    .with_note(format!("std_err {:.3e}, fit residual {:.2e}", r.value.std_err, r.residual)),
            ),
            Err(e) => report.push(Record::failed(name, tol, e)),
        }
    }
    report.series.push(series);
    Ok(())
}
