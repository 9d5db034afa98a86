//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when
//! any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcharm::cli::{self, Cli};
use qcharm::domain::{ahlfors_constant, lavrentiev_constant, pair_probes, quasicircle_constant};
use qcharm::geometry::{
    extract_coefficients, level_curve_length, ArcSet, PolygonalCurve, QuadratureConfig,
};
use qcharm::harmonic::{BoundaryPhase, PoissonHarmonicMap, SeriesHarmonicMap};
use qcharm::theorems::{
    check_prop1, schwarz_radial_check, thm1_bound, thm2_bound, thm4_ratio, thm5_bound,
    HarnessConfig, InequalityReport, Thm2Options,
};
use qcharm::HarmonicMap64;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn quad() -> QuadratureConfig<f64> {
    QuadratureConfig::default()
}

fn harness() -> HarnessConfig<f64> {
    HarnessConfig::default()
}

fn gallery() -> Vec<(&'static str, HarmonicMap64)> {
    let poisson: HarmonicMap64 = PoissonHarmonicMap::new(1.0, BoundaryPhase::Sine { eps: 0.2 })
        .unwrap()
        .into();
    vec![
        ("identity", HarmonicMap64::identity()),
        ("scaled:2", HarmonicMap64::scaled_identity(2.0)),
        (
            "affine:1,0.5",
            HarmonicMap64::affine(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)),
        ),
        ("poly:z+0.3*zbar^2", HarmonicMap64::polynomial(0.3, 2)),
        ("poisson:phi=t+0.2*sin(t)", poisson),
    ]
}

fn worst_margin<'a>(reports: impl IntoIterator<Item = &'a InequalityReport>) -> f64 {
    reports
        .into_iter()
        .filter(|r| r.binding)
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min)
}

fn polygon_length(points: &[Complex64]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| (points[(i + 1) % n] - points[i]).norm())
        .sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let q = quad();
    let id = HarmonicMap64::identity();
    let mut worst_id = 0.0f64;
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let got = level_curve_length(&id, r, &q).unwrap().value;
        worst_id = worst_id.max((got - 2.0 * PI * r).abs());
    }
    let affine = HarmonicMap64::affine(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0));
    let mut worst_aff = 0.0f64;
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let got = level_curve_length(&affine, r, &q).unwrap().value;
        let pts: Vec<Complex64> = (0..1 << 16)
            .map(|j| {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 65536.0);
                z + 0.5 * z.conj()
            })
            .collect();
        let oracle = polygon_length(&pts);
        worst_aff = worst_aff.max((got - oracle).abs() / oracle);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_id < 1e-9 && worst_aff < 1e-6 && secs < 5.0,
        format!("identity err {worst_id:.2e}, affine rel err {worst_aff:.2e}, {secs:.2} s"),
    )
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let q = quad();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut worst_rho) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = rng.gen_range(1..=32);
        let a: Vec<Complex64> = (0..=n).map(|_| random_complex(&mut rng)).collect();
        let b: Vec<Complex64> = (0..n).map(|_| random_complex(&mut rng)).collect();
        let map: HarmonicMap64 = SeriesHarmonicMap::new(a.clone(), b.clone()).into();
        let c5 = extract_coefficients(&map, n, 0.5, &q).unwrap();
        let c7 = extract_coefficients(&map, n, 0.7, &q).unwrap();
        for k in 0..=n {
            let bk = if k == 0 {
                Complex64::default()
            } else {
                b[k - 1]
            };
            worst = worst
                .max((c5.a[k] - a[k]).norm())
                .max((c5.b[k] - bk).norm());
            worst_rho = worst_rho
                .max((c5.a[k] - c7.a[k]).norm())
                .max((c5.b[k] - c7.b[k]).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && worst_rho < 1e-9 && secs < 10.0,
        format!("max coefficient err {worst:.2e}, rho 0.5 vs 0.7 {worst_rho:.2e}, {secs:.2} s"),
    )
}

fn criterion_3() -> Outcome {
    let cfg = harness();
    let mut pass = true;
    let mut details = Vec::new();
    for m in [0.5, 1.0, 3.0] {
        let reports = thm5_bound(&HarmonicMap64::scaled_identity(m), Some(1.0), 8, &cfg).unwrap();
        let sharp = reports.iter().find(|r| r.name == "thm5.sharpness");
        let rel = sharp.map_or(f64::INFINITY, |r| (r.lhs - r.rhs).abs() / r.rhs);
        let higher = reports
            .iter()
            .filter(|r| r.name == "thm5" && r.params["n"] >= 2.0)
            .map(|r| r.lhs)
            .fold(0.0, f64::max);
        pass &= rel < 1e-8 && higher < 1e-9 && reports.iter().all(|r| r.holds);
        details.push(format!("M={m}: rel {rel:.1e}, higher {higher:.1e}"));
    }
    outcome(pass, details.join("; "))
}

fn criterion_4() -> Outcome {
    let cfg = harness();
    let id = HarmonicMap64::identity();
    let mut rhs = Vec::new();
    let mut holds = true;
    for k in 1..=5 {
        let m = 2.0 * PI - 10f64.powi(-k);
        let rep = thm1_bound(&id, &ArcSet::centered(0.0, m).unwrap(), &cfg).unwrap();
        holds &= rep.holds;
        rhs.push(rep.rhs);
    }
    let limit = 2.0 * PI;
    let monotone = rhs.windows(2).all(|w| w[1] > w[0] && w[1] <= limit);
    let gap = limit - rhs[rhs.len() - 1];
    outcome(
        holds && monotone && gap < 1e-4,
        format!("LHS >= RHS: {holds}, monotone approach: {monotone}, final gap {gap:.3e} (needs < 1e-4)"),
    )
}

fn criterion_5() -> Outcome {
    let opts = Thm2Options {
        zeta0: Complex64::new(1.0, 0.0),
        k: Some(1.0),
        m_lav: Some(PI / 2.0),
        radii: vec![0.05, 0.1, 0.5, 1.0, 2.0],
    };
    let reports = thm2_bound(&HarmonicMap64::identity(), &opts, &harness()).unwrap();
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| r.name != "thm2.isoperimetric" && !r.holds)
        .map(|r| {
            format!(
                "{}@r={} (margin {:.2e})",
                r.name,
                r.params.get("r").copied().unwrap_or(f64::NAN),
                r.margin
            )
        })
        .collect();
    let cross = reports
        .iter()
        .filter(|r| r.name.contains("crosscheck") || r.name.contains("doubling"))
        .all(|r| r.holds);
    outcome(
        failing.is_empty() && cross,
        if failing.is_empty() {
            "chain holds at every radius, cross-checks agree".to_string()
        } else {
            format!(
                "cross-checks agree: {cross}; failing: {}",
                failing.join(", ")
            )
        },
    )
}

fn criterion_6() -> Outcome {
    let radii: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let mut worst = f64::INFINITY;
    let mut all = true;
    for (name, map) in gallery() {
        let reports = check_prop1(&map, None, &radii, &harness()).unwrap();
        let m = worst_margin(
            reports
                .iter()
                .filter(|r| r.name != "prop1.hardy_norm" && r.name != "prop1.perimeter"),
        );
        if m < -1e-9 || !reports.iter().all(|r| r.passes()) {
            all = false;
            eprintln!("prop1 failure for {name}: worst margin {m:e}");
        }
        worst = worst.min(m);
    }
    outcome(
        all,
        format!("worst margin {worst:.3e} over 5 maps x 9 radii"),
    )
}

fn criterion_7() -> Outcome {
    let radii = [0.05, 0.1, 0.2, 0.4, 0.6];
    let mut all = true;
    let mut details = Vec::new();
    for (name, map) in gallery() {
        let reports = thm4_ratio(&map, None, &radii, 0.05, &harness()).unwrap();
        let bound = reports.iter().filter(|r| r.name == "thm4").all(|r| r.holds);
        let ratios: Vec<f64> = reports
            .iter()
            .filter(|r| r.name == "thm4")
            .map(|r| r.lhs)
            .collect();
        let spread = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let constant = spread < 1e-9;
        let trend = constant
            || reports
                .iter()
                .filter(|r| r.name == "thm4.trend")
                .all(|r| r.holds);
        all &= bound && trend;
        if !(bound && trend) {
            details.push(format!("{name}: bound {bound}, trend {trend}"));
        }
    }
    outcome(
        all,
        if details.is_empty() {
            "bound and trend hold for 5 maps".to_string()
        } else {
            details.join("; ")
        },
    )
}

fn closed_square(per_side: usize) -> PolygonalCurve<f64> {
    let corners = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 1.0),
    ];
    let mut v = Vec::new();
    for s in 0..4 {
        for k in 0..per_side {
            let t = k as f64 / per_side as f64;
            v.push(corners[s] + (corners[(s + 1) % 4] - corners[s]) * t);
        }
    }
    PolygonalCurve::closed(v).unwrap()
}

/// Brute force over the given pairs: arc lengths by direct summation and
/// arc diameters by all-pairs distances.
fn pair_oracle(v: &[Complex64], pairs: &[(usize, usize)]) -> (f64, f64) {
    let n = v.len();
    let seg = |k: usize| (v[(k + 1) % n] - v[k]).norm();
    let (mut lav, mut qc) = (0.0f64, 0.0f64);
    for &(i, j) in pairs {
        let chord = (v[j] - v[i]).norm();
        let forward: f64 = (i..j).map(seg).sum();
        let backward: f64 = (j..n).chain(0..i).map(seg).sum();
        let arc: Vec<Complex64> = if forward <= backward {
            v[i..=j].to_vec()
        } else {
            v[j..].iter().chain(&v[..=i]).copied().collect()
        };
        let mut diam = 0.0f64;
        for a in &arc {
            for b in &arc {
                diam = diam.max((a - b).norm());
            }
        }
        lav = lav.max(forward.min(backward) / chord);
        qc = qc.max(diam / chord);
    }
    (lav, qc)
}

fn criterion_8() -> Outcome {
    let circle = PolygonalCurve::regular(4096, Complex64::default(), 1.0).unwrap();
    let lav = lavrentiev_constant(&circle, 20_000, 0).unwrap().value;
    let qc = quasicircle_constant(&circle, 20_000, 0).unwrap().value;
    let ahl = ahlfors_constant(&circle, 128, 48, 0).unwrap().value;
    let circle_ok = (lav - PI / 2.0).abs() <= 1e-3
        && (qc - 1.0).abs() <= 1e-3
        && (ahl - 2.0 * PI).abs() <= 2e-2;
    let square = closed_square(32);
    let probes = pair_probes(square.len(), 20_000, 0);
    let (lav_o, qc_o) = pair_oracle(square.vertices(), &probes.pairs);
    let lav_s = lavrentiev_constant(&square, 20_000, 0).unwrap().value;
    let qc_s = quasicircle_constant(&square, 20_000, 0).unwrap().value;
    let rel = ((lav_s - lav_o).abs() / lav_o).max((qc_s - qc_o).abs() / qc_o);
    outcome(
        circle_ok && rel <= 1e-12,
        format!(
            "circle: lavrentiev {lav:.6}, quasicircle {qc:.6}, ahlfors {ahl:.4}; square vs brute force rel {rel:.1e}"
        ),
    )
}

fn verdicts(reports: &[InequalityReport]) -> Vec<(String, bool)> {
    reports.iter().map(|r| (r.name.clone(), r.holds)).collect()
}

fn close(a: f64, b: f64) -> bool {
    // Vanishing coefficients sit at rounding level, hence the absolute floor.
    (a - b).abs() <= 1e-8 * a.abs().max(b.abs()) + 1e-12
}

fn criterion_9() -> Outcome {
    let cfg = harness();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let radii = [0.2, 0.5, 0.8];
    let mut failures = Vec::new();
    for trial in 0..10 {
        let n = rng.gen_range(2..=5);
        let mut a = vec![Complex64::default(), Complex64::new(1.0, 0.0)];
        a.extend((2..=n).map(|k| random_complex(&mut rng) * (0.04 / k as f64)));
        let b: Vec<Complex64> = (1..=n)
            .map(|k| random_complex(&mut rng) * (0.04 / k as f64))
            .collect();
        let map: HarmonicMap64 = SeriesHarmonicMap::new(a, b).into();
        let c = rng.gen_range(0.5..3.0);
        let alpha = rng.gen_range(0.0..2.0 * PI);
        let scaled = map.scale(c);
        let rotated = map.rotate_argument(alpha);

        let p = check_prop1(&map, None, &radii, &cfg).unwrap();
        let ps = check_prop1(&scaled, None, &radii, &cfg).unwrap();
        let pr = check_prop1(&rotated, None, &radii, &cfg).unwrap();
        let t = thm5_bound(&map, None, 6, &cfg).unwrap();
        let ts = thm5_bound(&scaled, None, 6, &cfg).unwrap();
        let tr = thm5_bound(&rotated, None, 6, &cfg).unwrap();
        let mut ok = verdicts(&p) == verdicts(&ps) && verdicts(&p) == verdicts(&pr);
        ok &= verdicts(&t) == verdicts(&ts) && verdicts(&t) == verdicts(&tr);
        for ((x, s), r) in p.iter().zip(&ps).zip(&pr) {
            if x.name == "prop1.upper" {
                ok &= close(s.lhs, c * x.lhs) && close(r.lhs, x.lhs);
            }
        }
        for ((x, s), r) in t.iter().zip(&ts).zip(&tr) {
            ok &= close(s.lhs, c * x.lhs) && close(s.params["M_rad"], c * x.params["M_rad"]);
            ok &= close(r.lhs, x.lhs) && close(r.params["M_rad"], x.params["M_rad"]);
        }
        if !ok {
            failures.push(trial);
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "10 maps: lengths, coefficients and verdicts equivariant".to_string()
        } else {
            format!("failing trials {failures:?}")
        },
    )
}

fn criterion_10() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut all = true;
    for (name, map) in gallery() {
        let big_r = map.interior_limit();
        let radii: Vec<f64> = (1..=64).map(|k| big_r * k as f64 / 64.0).collect();
        match schwarz_radial_check(&map, None, &radii, &harness()) {
            Ok(reports) => {
                let m = worst_margin(&reports);
                all &= m >= -1e-9;
                worst = worst.min(m);
            }
            Err(e) => {
                all = false;
                eprintln!("radial Schwarz check failed for {name}: {e}");
            }
        }
    }
    outcome(
        all,
        format!("worst margin {worst:.3e} over 5 maps x 64 radii"),
    )
}

fn verify_csv(dir: &std::path::Path, tag: &str) -> Vec<u8> {
    use clap::Parser;
    let base = dir.join(tag);
    let args = [
        "qcharm",
        "--gallery",
        "poly:z+0.3*zbar^2",
        "--seed",
        "7",
        "--out",
        base.to_str().unwrap(),
        "verify",
        "prop1",
    ];
    let parsed = Cli::try_parse_from(args).unwrap();
    cli::run(&parsed, &mut Vec::new()).unwrap();
    std::fs::read(dir.join(format!("{tag}.csv"))).unwrap()
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let first = verify_csv(dir.path(), "first");
    let second = verify_csv(dir.path(), "second");
    outcome(
        first == second && !first.is_empty(),
        format!("{} bytes, identical: {}", first.len(), first == second),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("oracle lengths", criterion_1),
        ("coefficient round-trip", criterion_2),
        ("coefficient bound sharpness", criterion_3),
        ("boundary arc estimate", criterion_4),
        ("crosscut chain", criterion_5),
        ("length sandwich", criterion_6),
        ("radial-to-level ratio", criterion_7),
        ("domain constants", criterion_8),
        ("scale and rotation invariance", criterion_9),
        ("radial Schwarz lemma", criterion_10),
        ("determinism", criterion_11),
    ];
    // Optional criterion numbers on the command line select a subset.
    let selected: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !selected.is_empty() && !selected.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!(
            "{verdict} {:>2} {name}: {} [{:.1} s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    let ran = if selected.is_empty() {
        criteria.len()
    } else {
        selected.len()
    };
    println!("{} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
