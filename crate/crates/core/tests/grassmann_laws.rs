use nalgebra::DMatrix;
use proptest::prelude::*;
use valgeo::grassmann::*;
use valgeo::special::kappa;
use valgeo::SeededSampler;

fn pair(n: usize, i: usize, j: usize, seed: u64) -> (Subspace, Subspace) {
    let mut s = SeededSampler::new(seed, 0);
    (
        haar_subspace(n, i, &mut s).unwrap(),
        haar_subspace(n, j, &mut s).unwrap(),
    )
}

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..7).prop_flat_map(|n| (Just(n), 0..=n, 0..=n))
}

/// Two-sample Kolmogorov–Smirnov statistic.
fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

// critical value at level 0.01 for equal sample sizes m
fn ks_critical(m: usize) -> f64 {
    1.628 * (2.0 / m as f64).sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cosine_symmetries((n, i, j) in dims(), seed in any::<u64>()) {
        let (e, f) = pair(n, i, j, seed);
        let c = cos_angle(&e, &f).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((c - cos_angle(&f, &e).unwrap()).abs() < 1e-10);
        let (ep, fp) = (orthocomplement(&e), orthocomplement(&f));
        prop_assert!((c - cos_angle(&ep, &fp).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn sine_symmetries((n, i, j) in dims(), seed in any::<u64>()) {
        let (e, f) = pair(n, i, j, seed);
        let s = sin_angle(&e, &f).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s - sin_angle(&f, &e).unwrap()).abs() < 1e-10);
        let (ep, fp) = (orthocomplement(&e), orthocomplement(&f));
        prop_assert!((s - sin_angle(&ep, &fp).unwrap()).abs() < 1e-10);
        prop_assert!((s - cos_angle(&e, &fp).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn equal_dimension_branches_agree(n in 2usize..7, seed in any::<u64>()) {
        let i = 1 + (seed as usize) % (n - 1);
        let (e, f) = pair(n, i, i, seed);
        let direct: f64 = principal_cosines(&e, &f).unwrap().iter().product();
        let complements: f64 = principal_cosines(&orthocomplement(&e), &orthocomplement(&f))
            .unwrap()
            .iter()
            .product();
        prop_assert!((direct.abs() - complements.abs()).abs() < 1e-10);
    }

    #[test]
    fn volume_ratio_definition((n, i, j) in dims(), seed in any::<u64>()) {
        prop_assume!(i >= 1 && i <= j);
        let (e, f) = pair(n, i, j, seed);
        // unit cube spanned by the basis of E, mapped into F coordinates
        let a = f.basis().transpose() * e.basis();
        let ratio = if i == j { a.determinant().abs() } else { (a.transpose() * &a).determinant().sqrt() };
        prop_assert!((ratio - cos_angle(&e, &f).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn span_sum_contains_both((n, i, j) in dims(), seed in any::<u64>()) {
        let (e, f) = pair(n, i, j, seed);
        let sum = span_sum(&e, &f).unwrap();
        prop_assert_eq!(sum.dim(), (i + j).min(n));
        prop_assert!(sum.contains(&e, 1e-9) && sum.contains(&f, 1e-9));
    }

    #[test]
    fn ellipsoid_image_of_projection((n, i, _j) in dims(), seed in any::<u64>()) {
        prop_assume!(i >= 1);
        let (l, f) = pair(n, i, i, seed);
        let v = ellipsoid_image_volume(&f.projector(), &l).unwrap();
        prop_assert!((v - kappa(i) * cos_angle(&l, &f).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn haar_squared_cosine_moment() {
    let mut s = SeededSampler::new(5, 0);
    let axis = Subspace::coordinate(3, &[0]).unwrap();
    let m = 100_000;
    let xs: Vec<f64> = (0..m)
        .map(|_| cos_angle(&haar_subspace(3, 1, &mut s).unwrap(), &axis).unwrap().powi(2))
        .collect();
    let mean = xs.iter().sum::<f64>() / m as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    assert!((mean - 1.0 / 3.0).abs() < 3.0 * (var / m as f64).sqrt());
}

#[test]
fn sample_within_moment() {
    let mut s = SeededSampler::new(6, 0);
    let h = Subspace::coordinate(4, &[0, 1, 2]).unwrap();
    let line = Subspace::coordinate(4, &[1]).unwrap();
    let m = 100_000;
    let xs: Vec<f64> = (0..m)
        .map(|_| {
            let l = sample_within(&h, 1, &mut s).unwrap();
            assert!((cos_angle(&l, &h).unwrap() - 1.0).abs() < 1e-10);
            cos_angle(&l, &line).unwrap().powi(2)
        })
        .collect();
    let mean = xs.iter().sum::<f64>() / m as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    assert!((mean - 1.0 / 3.0).abs() < 3.0 * (var / m as f64).sqrt());
}

#[test]
fn haar_rotation_invariance_ks() {
    let mut s = SeededSampler::new(7, 0);
    let g = haar_orthogonal(5, &mut s);
    let m = 4000;
    let mut plain = Vec::with_capacity(m);
    let mut rotated = Vec::with_capacity(m);
    for _ in 0..m {
        let e = haar_subspace(5, 2, &mut s).unwrap();
        let f = haar_subspace(5, 3, &mut s).unwrap();
        plain.push(cos_angle(&e, &f).unwrap());
        let e2 = haar_subspace(5, 2, &mut s).unwrap().rotated(&g);
        let f2 = haar_subspace(5, 3, &mut s).unwrap().rotated(&g);
        rotated.push(cos_angle(&e2, &f2).unwrap());
    }
    assert!(ks_statistic(plain, rotated) < ks_critical(m));
}

#[test]
fn sample_containing_stabilizer_invariance_ks() {
    let mut s = SeededSampler::new(8, 0);
    let h = Subspace::coordinate(4, &[0]).unwrap();
    let l = haar_subspace(4, 2, &mut s).unwrap();
    // rotation fixing e_1
    let q = haar_orthogonal(3, &mut s);
    let mut g = DMatrix::identity(4, 4);
    g.view_mut((1, 1), (3, 3)).copy_from(&q);
    let m = 4000;
    let mut plain = Vec::with_capacity(m);
    let mut rotated = Vec::with_capacity(m);
    for _ in 0..m {
        let a = sample_containing(&h, 2, &mut s).unwrap();
        assert!(a.contains(&h, 1e-10));
        plain.push(cos_angle(&a, &l).unwrap());
        let b = sample_containing(&h, 2, &mut s).unwrap().rotated(&g);
        rotated.push(cos_angle(&b, &l).unwrap());
    }
    assert!(ks_statistic(plain, rotated) < ks_critical(m));
}

#[test]
fn planar_volume_ratio_by_sampling() {
    // random segment on a line at angle pi/3 to the x-axis
    let t = std::f64::consts::FRAC_PI_3;
    let e = Subspace::from_columns(2, &[vec![t.cos(), t.sin()]]).unwrap();
    let f = Subspace::coordinate(2, &[0]).unwrap();
    let mut s = SeededSampler::new(9, 0);
    for _ in 0..10 {
        let (a, b) = (s.normal(), s.normal());
        let (p, q) = ([a * t.cos(), a * t.sin()], [b * t.cos(), b * t.sin()]);
        let ratio = (p[0] - q[0]).abs() / (a - b).abs();
        assert!((ratio - cos_angle(&e, &f).unwrap()).abs() < 1e-6);
    }
    assert!((cos_angle(&e, &f).unwrap() - 0.5).abs() < 1e-12);
}
