use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use qcharm::geometry::{
    extract_coefficients, image_area, image_polygon, level_curve_length, AreaRegion,
    QuadratureConfig,
};
use qcharm::harmonic::SeriesHarmonicMap;
use qcharm::theorems::{check_prop1, thm5_bound, HarnessConfig};
use qcharm::HarmonicMap64;

/// `z + Σ aₖzᵏ + conj(Σ bₖzᵏ)` with `Σ k(|aₖ| + |bₖ|) < 1/2`, so the map is
/// sense-preserving and injective on the disk.
fn near_identity() -> impl Strategy<Value = HarmonicMap64> {
    let coeff = (-1.0f64..1.0, -1.0f64..1.0);
    (
        prop::collection::vec(coeff.clone(), 1..5),
        prop::collection::vec(coeff, 1..5),
    )
        .prop_map(|(a, b)| {
            let size = |k: usize| 0.05 / (k * k) as f64;
            let mut analytic = vec![Complex64::default(), Complex64::new(1.0, 0.0)];
            analytic.extend(
                a.iter()
                    .enumerate()
                    .map(|(i, &(x, y))| Complex64::new(x, y) * size(i + 2)),
            );
            let anti = b
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Complex64::new(x, y) * size(i + 1))
                .collect();
            SeriesHarmonicMap::new(analytic, anti).into()
        })
}

fn q() -> QuadratureConfig<f64> {
    QuadratureConfig::default()
}

fn length(map: &HarmonicMap64, r: f64) -> f64 {
    level_curve_length(map, r, &q()).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn level_length_increases(map in near_identity(), r in 0.05f64..0.9, dr in 0.01f64..0.09) {
        prop_assert!(length(&map, r) <= length(&map, r + dr) + 1e-12);
    }

    #[test]
    fn sandwich_holds(map in near_identity()) {
        let reports = check_prop1(&map, None, &[0.2, 0.5, 0.8], &HarnessConfig::default()).unwrap();
        for r in &reports {
            prop_assert!(r.passes(), "{:?}", r);
        }
    }

    #[test]
    fn pointwise_sandwich(map in near_identity(), r in 0.05f64..0.95, t in 0.0f64..(2.0 * PI)) {
        let z = Complex64::from_polar(r, t);
        let d = map.wirtinger(z).unwrap();
        let speed = map.ring_speed(r, t).unwrap();
        prop_assert!(r * d.lambda <= speed * (1.0 + 1e-12));
        prop_assert!(speed <= r * d.op_norm * (1.0 + 1e-12));
        prop_assert!((d.op_norm * d.lambda - d.jacobian.abs()).abs() <= 1e-12 * d.op_norm.powi(2));
    }

    #[test]
    fn diameter_at_most_length(map in near_identity(), r in 0.1f64..0.95) {
        let poly = image_polygon(&map, r, 256).unwrap();
        prop_assert!(poly.diameter() <= length(&map, r));
    }

    #[test]
    fn isoperimetric(map in near_identity(), r in 0.1f64..1.0) {
        let area = image_area(&map, AreaRegion::Disk { radius: r }, &q()).unwrap().value;
        let len = length(&map, r.min(q().boundary_radius));
        prop_assert!(area <= len * len / (4.0 * PI) * (1.0 + 1e-9));
    }

    #[test]
    fn polygon_refinement(map in near_identity(), r in 0.1f64..0.95, n in 8usize..200) {
        let coarse = image_polygon(&map, r, n).unwrap().length();
        let fine = image_polygon(&map, r, 2 * n).unwrap().length();
        prop_assert!(coarse <= fine * (1.0 + 1e-14));
        prop_assert!(fine <= length(&map, r) * (1.0 + 1e-12));
    }

    #[test]
    fn coefficients_do_not_depend_on_radius(map in near_identity(), rho in 0.3f64..0.9) {
        let a = extract_coefficients(&map, 6, 0.5, &q()).unwrap();
        let b = extract_coefficients(&map, 6, rho, &q()).unwrap();
        for n in 0..=6 {
            prop_assert!((a.a[n] - b.a[n]).norm() < 1e-12);
            prop_assert!((a.b[n] - b.b[n]).norm() < 1e-12);
        }
    }

    #[test]
    fn scale_and_rotation(map in near_identity(), c in 0.2f64..5.0, alpha in 0.0f64..(2.0 * PI), r in 0.1f64..0.9) {
        let base = length(&map, r);
        prop_assert!((length(&map.scale(c), r) - c * base).abs() <= 1e-12 * c * base);
        prop_assert!((length(&map.rotate_argument(alpha), r) - base).abs() <= 1e-12 * base);
        let area = |m: &HarmonicMap64| image_area(m, AreaRegion::Disk { radius: r }, &q()).unwrap().value;
        let a0 = area(&map);
        prop_assert!((area(&map.scale(c)) - c * c * a0).abs() <= 1e-9 * c * c * a0);
        prop_assert!((area(&map.rotate_argument(alpha)) - a0).abs() <= 1e-9 * a0);
        let k = |m: &HarmonicMap64| m.estimate_k(0.99, 64).unwrap().k_lower;
        prop_assert!((k(&map.scale(c)) - k(&map)).abs() <= 1e-12 * k(&map));
    }
}

#[test]
fn thm5_verdicts_survive_scaling() {
    let cfg = HarnessConfig::default();
    let map = HarmonicMap64::polynomial(0.3, 2);
    let base = thm5_bound(&map, None, 6, &cfg).unwrap();
    let scaled = thm5_bound(&map.scale(4.0), None, 6, &cfg).unwrap();
    for (x, y) in base.iter().zip(&scaled) {
        assert_eq!(x.holds, y.holds);
        assert!((y.rhs - 4.0 * x.rhs).abs() <= 1e-12 * y.rhs);
    }
}

#[test]
fn single_precision_lengths() {
    let cfg = QuadratureConfig::<f32> {
        abs_tol: 1e-5,
        rel_tol: 1e-5,
        ..QuadratureConfig::default()
    };
    let map = qcharm::HarmonicMap32::affine(
        num_complex::Complex32::new(1.0, 0.0),
        num_complex::Complex32::new(0.5, 0.0),
    );
    let single = level_curve_length(&map, 0.5, &cfg).unwrap().value;
    let double = length(
        &HarmonicMap64::affine(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)),
        0.5,
    );
    assert!((single as f64 - double).abs() < 1e-4 * double);
}
