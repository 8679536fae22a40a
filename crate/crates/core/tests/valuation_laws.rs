use proptest::prelude::*;
use valgeo::bodies::{make_box, make_cube, make_random_polytope, make_simplex, Polytope};
use valgeo::grassmann::haar_subspace;
use valgeo::transforms::{GFunction, GFunctionSpec};
use valgeo::valuations::*;
use valgeo::SeededSampler;

const BUDGET: Budget = Budget { samples: 600 };

fn exprs(seed: u64) -> Vec<ValuationExpr> {
    let mut s = SeededSampler::new(seed, 7);
    let f = haar_subspace(3, 2, &mut s).unwrap();
    let r = haar_subspace(3, 1, &mut s).unwrap();
    let g = GFunction::closed(3, 1, GFunctionSpec::CosinePower { reference: r, power: 2.0 }).unwrap();
    vec![
        ValuationExpr::intrinsic(1),
        ValuationExpr::intrinsic(2),
        ValuationExpr::projection(f.clone()),
        ValuationExpr::crofton(g.clone()),
        ValuationExpr::product(ValuationExpr::intrinsic(1), ValuationExpr::intrinsic(1)),
        ValuationExpr::product(ValuationExpr::crofton(g), ValuationExpr::projection(f)),
    ]
}

fn eval(e: &ValuationExpr, p: &Polytope, seed: u64) -> f64 {
    evaluate(e, &BodySpec::from(p.clone()), BUDGET, &mut SeededSampler::new(seed, 0))
        .unwrap()
        .mean
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_invariant(seed in any::<u64>()) {
        let mut s = SeededSampler::new(seed, 1);
        let p = make_random_polytope(3, 10, &mut s).unwrap();
        let x = s.normal_vec(3);
        for e in exprs(seed) {
            prop_assert!(close(eval(&e, &p, seed), eval(&e, &p.translate(&x), seed)));
        }
    }

    #[test]
    fn even(seed in any::<u64>()) {
        let p = make_random_polytope(3, 10, &mut SeededSampler::new(seed, 1)).unwrap();
        for e in exprs(seed) {
            prop_assert!(e.is_even());
            prop_assert!(close(eval(&e, &p, seed), eval(&e, &p.reflect(), seed)));
        }
    }

    #[test]
    fn homogeneous(seed in any::<u64>(), lambda in 0.2f64..3.0) {
        let p = make_random_polytope(3, 10, &mut SeededSampler::new(seed, 1)).unwrap();
        for e in exprs(seed) {
            let k = e.degree().unwrap() as i32;
            prop_assert!(close(lambda.powi(k) * eval(&e, &p, seed), eval(&e, &p.scale(lambda), seed)));
        }
    }

    #[test]
    fn additive_on_a_split_box(seed in any::<u64>(), t in 0.1f64..0.9) {
        let cube = make_cube(3, 1.0);
        let left = make_box(&[t, 1.0, 1.0]);
        let right = make_box(&[1.0 - t, 1.0, 1.0]).translate(&[t, 0.0, 0.0]);
        let face = Polytope::new(3, vec![
            vec![t, 0.0, 0.0], vec![t, 1.0, 0.0], vec![t, 0.0, 1.0], vec![t, 1.0, 1.0],
        ]).unwrap();
        for e in exprs(seed) {
            let lhs = eval(&e, &cube, seed) + eval(&e, &face, seed);
            let rhs = eval(&e, &left, seed) + eval(&e, &right, seed);
            prop_assert!(close(lhs, rhs), "{e:?}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn product_with_intrinsic_volume_is_proportional_on_balls() {
    // V_1 * V_1 and V_2 agree up to a constant on subspace balls as well
    let mut s = SeededSampler::new(3, 0);
    let a = ValuationExpr::product(ValuationExpr::intrinsic(1), ValuationExpr::intrinsic(1));
    let (mut xs, mut ys) = (vec![], vec![]);
    for _ in 0..6 {
        let l = haar_subspace(3, 2, &mut s).unwrap();
        let body = BodySpec::Ball { subspace: l };
        xs.push(evaluate(&a, &body, Budget::new(20_000), &mut s).unwrap().mean);
        ys.push(evaluate(&ValuationExpr::intrinsic(2), &body, Budget::new(1), &mut s).unwrap().mean);
    }
    assert!(fit_scalar(&xs, &ys).residual < 0.02);
}

#[test]
fn lambda_of_volume_is_surface_area() {
    let mut s = SeededSampler::new(4, 0);
    let simplex = make_simplex(2);
    let r = lambda_apply(&ValuationExpr::intrinsic(2), &simplex, &default_lambda_grid(&simplex, 2), Budget::new(10), &mut s)
        .unwrap();
    assert!((r.value.mean - (2.0 + 2f64.sqrt())).abs() < 1e-8);
    assert_eq!(r.order, 1);
}
