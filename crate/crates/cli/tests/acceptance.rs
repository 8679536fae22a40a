//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//! Expected values are recomputed here from independent oracles and compared
//! with the suite records at the acceptance tolerances.

use std::time::{Duration, Instant};

use valgeo::transforms::funk_hecke_cosine_eigen;
use valgeo_cli::{run_suite, Record, RunConfig, SuiteReport, SUITES};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, detail: String::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }
}

fn timed(name: &str, cfg: &RunConfig) -> (SuiteReport, Duration) {
    let t = Instant::now();
    let r = run_suite(name, cfg).unwrap_or_else(|e| panic!("suite {name}: {e}"));
    (r, t.elapsed())
}

fn records<'a>(r: &'a SuiteReport, prefix: &str) -> Vec<&'a Record> {
    r.records.iter().filter(|x| x.name.starts_with(prefix)).collect()
}

fn rel_err(observed: f64, expected: f64) -> f64 {
    (observed - expected).abs() / expected.abs()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

// kappa_d by kappa_d = 2 pi / d * kappa_{d-2}
fn ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * ball_volume(d - 2),
    }
}

fn legendre(d: usize, t: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, t);
    if d == 0 {
        return 1.0;
    }
    for m in 1..d {
        let p2 = ((2 * m + 1) as f64 * t * p1 - m as f64 * p0) / (m + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

// composite Simpson for int_0^1 t P_d(t) dt (smooth polynomial integrand)
fn cosine_moment(d: usize) -> f64 {
    let m = 20_000;
    let h = 1.0 / m as f64;
    let f = |t: f64| t * legendre(d, t);
    let mut s = f(0.0) + f(1.0);
    for j in 1..m {
        s += if j % 2 == 1 { 4.0 } else { 2.0 } * f(j as f64 * h);
    }
    s * h / 3.0
}

fn simplex_oracle(n: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    match n {
        2 => vec![1.0, 1.0 + 0.5 * 2f64.sqrt(), 0.5],
        3 => {
            let dihedral = (1.0 / 3f64.sqrt()).acos();
            let v1 = (3.0 * (PI - PI / 2.0) + 3.0 * 2f64.sqrt() * (PI - dihedral)) / (2.0 * PI);
            let surface = 1.5 + 3f64.sqrt() / 2.0;
            vec![1.0, v1, surface / 2.0, 1.0 / 6.0]
        }
        _ => unreachable!(),
    }
}

fn criterion1((r, t): &(SuiteReport, Duration)) -> Outcome {
    let (r, t) = (r, *t);
    let mut out = Outcome::new();
    let combos: usize = (3..=6).map(|n| (n + 1) * (n + 1)).sum();
    for family in ["cos symmetry", "sin symmetry"] {
        let rs = records(r, family);
        out.require(rs.len() == combos, format!("{family}: {} of {combos} (n,i,j) cases", rs.len()));
        let worst = rs.iter().map(|x| x.observed).fold(0.0, f64::max);
        out.require(worst <= 1e-10, format!("{family} deviation {worst:.2e}"));
    }
    let worst_range = records(r, "range").iter().map(|x| x.observed).fold(0.0, f64::max);
    out.require(worst_range == 0.0, "values outside [0, 1]");
    let def = records(r, "volume ratio definition");
    let expected_def: usize = (3..=6).map(|n| (n - 1) * (n - 1)).sum();
    out.require(def.len() == expected_def, format!("{} definition cases", def.len()));
    let worst = def.iter().map(|x| x.observed).fold(0.0, f64::max);
    out.require(worst <= 0.01, format!("definition error {worst:.4}"));
    out.require(t < Duration::from_secs(10), format!("runtime {t:?}"));
    if out.pass {
        out.detail = format!("{} records, worst definition error {worst:.4}, {:.1} s", r.records.len(), t.as_secs_f64());
    }
    out
}

fn criterion2((r, t): &(SuiteReport, Duration)) -> Outcome {
    let (r, t) = (r, *t);
    let mut out = Outcome::new();
    for n in [5, 6] {
        let rs = records(r, &format!("n={n} "));
        out.require(rs.len() == 100, format!("n={n}: {} triples", rs.len()));
        let worst = rs.iter().map(|x| rel_err(x.observed, x.expected)).fold(0.0, f64::max);
        out.require(worst <= 1e-9, format!("n={n}: relative error {worst:.2e}"));
    }
    out.require(t < Duration::from_secs(5), format!("runtime {t:?}"));
    if out.pass {
        out.detail = format!("200 triples, {:.2} s", t.as_secs_f64());
    }
    out
}

fn criterion3((r, t): &(SuiteReport, Duration)) -> Outcome {
    let (r, t) = (r, *t);
    let mut out = Outcome::new();
    let mut worst: f64 = 0.0;
    for n in [3, 4] {
        for k in 1..n {
            let cube = binom(n, k);
            let ball = binom(n, k) * ball_volume(n) / ball_volume(n - k);
            for (name, oracle) in [(format!("cube n={n} V{k}"), cube), (format!("ball n={n} V{k}"), ball)] {
                match records(r, &name).first() {
                    Some(x) => {
                        let e = rel_err(x.observed, oracle);
                        worst = worst.max(e);
                        out.require(e <= 0.02, format!("{name}: {} vs {oracle}", x.observed));
                    }
                    None => out.require(false, format!("{name} missing")),
                }
            }
        }
    }
    out.require(t < Duration::from_secs(120), format!("runtime {t:?}"));
    if out.pass {
        out.detail = format!("worst relative error {worst:.4}, {:.1} s", t.as_secs_f64());
    }
    out
}

fn criterion4(cfg: &RunConfig) -> Outcome {
    let mut out = Outcome::new();
    let (r, t) = timed("steiner", cfg);
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let cube: Vec<f64> = (0..=n).map(|j| binom(n, j)).collect();
        for (body, oracle) in [("cube", cube), ("simplex", simplex_oracle(n))] {
            for m in 0..=n {
                let name = format!("{body} n={n} eps^{m} coefficient");
                let want = ball_volume(m) * oracle[n - m];
                match records(&r, &name).first() {
                    Some(x) => {
                        let e = rel_err(x.observed, want);
                        worst = worst.max(e);
                        out.require(e <= 0.02, format!("{name}: {} vs {want}", x.observed));
                    }
                    None => out.require(false, format!("{name} missing")),
                }
            }
        }
    }
    let seg: Vec<&Record> = r.records.iter().filter(|x| x.name.contains("segment derivative")).collect();
    out.require(!seg.is_empty(), "no segment-derivative records");
    let worst_seg = seg.iter().map(|x| rel_err(x.observed, x.expected)).fold(0.0, f64::max);
    out.require(worst_seg <= 1e-6, format!("segment law error {worst_seg:.2e}"));
    out.require(t < Duration::from_secs(180), format!("runtime {t:?}"));
    if out.pass {
        out.detail = format!(
            "worst coefficient error {worst:.4}, segment law {worst_seg:.1e}, {:.1} s",
            t.as_secs_f64()
        );
    }
    out
}

fn criterion5(lemma22: &SuiteReport) -> Outcome {
    let mut out = Outcome::new();
    match records(lemma22, "prop13 complementary").first() {
        Some(x) => out.require((x.observed - 1.0).abs() <= 1e-12, format!("complementary planes: {}", x.observed)),
        None => out.require(false, "complementary record missing"),
    }
    let rotated = records(lemma22, "prop13 rotated");
    out.require(!rotated.is_empty(), "no rotated-plane records");
    let worst = rotated.iter().map(|x| rel_err(x.observed, x.expected)).fold(0.0, f64::max);
    out.require(worst <= 0.02, format!("rotated planes error {worst:.4}"));
    if out.pass {
        out.detail = format!("complementary exact, {} rotated pairs, worst {worst:.4}", rotated.len());
    }
    out
}

fn criterion6(lemma22: &SuiteReport, t22: Duration, cfg: &RunConfig) -> Outcome {
    let mut out = Outcome::new();
    let (lemma24, t24) = timed("lemma24", cfg);
    let mut detail = Vec::new();
    for (r, name) in [(lemma22, "lemma22"), (&lemma24, "lemma24")] {
        let points = r.series.iter().find(|s| s.name == format!("{name}_points")).map_or(0, |s| s.rows.len());
        out.require(points >= 20, format!("{name}: {points} sample points"));
        match records(r, &format!("{name} fitted-scalar residual")).first() {
            Some(x) => {
                out.require(x.observed <= 0.03, format!("{name} residual {:.4}", x.observed));
                detail.push(format!("{name} residual {:.4}", x.observed));
            }
            None => out.require(false, format!("{name} residual missing")),
        }
    }
    out.require(t22 + t24 < Duration::from_secs(600), format!("runtime {:?}", t22 + t24));
    if out.pass {
        out.detail = format!("{}, {:.1} s", detail.join(", "), (t22 + t24).as_secs_f64());
    }
    out
}

fn criterion7(cfg: &RunConfig) -> Outcome {
    let mut out = Outcome::new();
    let (r, _) = timed("lefschetz", cfg);
    let curve = r.series.iter().find(|s| s.name == "eigenvalue_vs_degree");
    out.require(curve.map_or(0, |c| c.rows.len()) == 5, "expected 5 degree blocks for d_max = 8");
    for d in (0..=8).step_by(2) {
        let predicted = cosine_moment(d) * legendre(d, 0.0);
        let nonzero = records(&r, &format!("degree {d} scalar nonzero"));
        out.require(nonzero.first().is_some_and(|x| x.pass && x.observed > 0.0), format!("degree {d} scalar not separated from zero"));
        match records(&r, &format!("degree {d} scalar vs eigenvalue product")).first() {
            Some(x) => {
                out.require((x.expected - predicted).abs() <= 1e-9, format!("degree {d}: product {} vs oracle {predicted}", x.expected));
                out.require((x.observed - x.expected).abs() <= x.tolerance, format!("degree {d}: scalar {} vs {}", x.observed, x.expected));
            }
            None => out.require(false, format!("degree {d} missing")),
        }
    }
    let leak = records(&r, "off-diagonal leakage").first().map_or(f64::INFINITY, |x| x.observed);
    out.require(leak <= 1e-2, format!("leakage {leak:.2e}"));
    for (d, want) in [(0, 0.5), (2, 0.125)] {
        let v = funk_hecke_cosine_eigen(3, d).unwrap();
        out.require((v - want).abs() <= 1e-6, format!("cosine eigenvalue d={d}: {v}"));
        out.require((v - cosine_moment(d)).abs() <= 1e-6, format!("cosine eigenvalue d={d} vs quadrature"));
    }
    if out.pass {
        out.detail = format!("5 nonzero degree scalars matching eigenvalue products, leakage {leak:.2e}");
    }
    out
}

fn criterion8(h: &SuiteReport, cfg: &RunConfig) -> Outcome {
    let mut out = Outcome::new();
    let (l, _) = timed("lambda", cfg);
    let mut detail = Vec::new();
    for (r, name) in [(h, "V1^2 / V2 n=3"), (&l, "Lambda V2 / V1 n=3"), (&l, "Lambda V3 / V2 n=3")] {
        match records(r, &format!("{name} ratio spread")).first() {
            Some(x) => {
                out.require(x.observed <= 0.03, format!("{name} spread {:.4}", x.observed));
                detail.push(format!("{name} {:.4}", x.observed));
            }
            None => out.require(false, format!("{name} missing")),
        }
    }
    match records(&l, "Lambda vol on the unit cube n=3").first() {
        Some(x) => {
            out.require(rel_err(x.observed, 6.0) <= 0.03, format!("Lambda vol(cube) = {}", x.observed));
            detail.push(format!("Lambda vol(cube) {:.4}", x.observed));
        }
        None => out.require(false, "Lambda vol missing"),
    }
    if out.pass {
        out.detail = detail.join(", ");
    }
    out
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn reduced(cfg: &RunConfig, suite: &str) -> RunConfig {
    let mut c = cfg.clone();
    c.samples = Some(match suite {
        "angles" => 300,
        "lefschetz" => 400,
        "steiner" | "lambda" => 20_000,
        _ => 2_000,
    });
    c
}

fn criterion9(cfg: &RunConfig, full: &[(&str, &SuiteReport)]) -> Outcome {
    let mut out = Outcome::new();
    for name in SUITES {
        let c = reduced(cfg, name);
        let a = in_pool(1, || run_suite(name, &c).unwrap());
        let b = in_pool(4, || run_suite(name, &c).unwrap());
        let again = in_pool(4, || run_suite(name, &c).unwrap());
        for other in [&b, &again] {
            out.require(a.to_json() == other.to_json(), format!("{name}: json differs"));
            out.require(a.to_csv() == other.to_csv(), format!("{name}: csv differs"));
        }
    }
    for (name, report) in full {
        let rerun = in_pool(4, || run_suite(name, cfg).unwrap());
        out.require(rerun.to_json() == report.to_json(), format!("{name}: full-budget rerun differs"));
    }
    if out.pass {
        out.detail = format!(
            "all {} suites identical across 1 and 4 workers; full-budget reruns identical for {}",
            SUITES.len(),
            full.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        );
    }
    out
}

fn report(n: usize, title: &str, o: &Outcome) -> bool {
    println!("criterion {n} [{title}]: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    o.pass
}

fn main() {
    let cfg = RunConfig::default();
    let mut all = true;
    let angles = timed("angles", &cfg);
    all &= report(1, "angle laws", &criterion1(&angles));
    let claim23 = timed("claim23", &cfg);
    all &= report(2, "ellipsoid identity", &criterion2(&claim23));
    let kubota = timed("kubota", &cfg);
    all &= report(3, "Cauchy-Kubota", &criterion3(&kubota));
    all &= report(4, "Steiner consistency", &criterion4(&cfg));
    let (lemma22, t22) = timed("lemma22", &cfg);
    all &= report(5, "product of projections", &criterion5(&lemma22));
    all &= report(6, "multiplication by intrinsic volumes", &criterion6(&lemma22, t22, &cfg));
    all &= report(7, "Lefschetz probe", &criterion7(&cfg));
    let (hadwiger, _) = timed("hadwiger", &cfg);
    all &= report(8, "algebra shadows", &criterion8(&hadwiger, &cfg));
    let full = [
        ("angles", &angles.0),
        ("claim23", &claim23.0),
        ("kubota", &kubota.0),
        ("lemma22", &lemma22),
        ("hadwiger", &hadwiger),
    ];
    all &= report(9, "reproducibility", &criterion9(&cfg, &full));
    if !all {
        std::process::exit(1);
    }
}
