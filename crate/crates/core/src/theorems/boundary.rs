use num_complex::Complex;

use super::{resolve_k, HarnessConfig, InequalityReport};
use crate::domain::{lavrentiev_constant, linear_connectivity_constant, ConnectivityConfig};
use crate::error::{Error, Result};
use crate::geometry::{
    boundary_image_length, boundary_polygon, crosscut_integral, crosscut_integral_fixed,
    image_area, image_area_fixed, ArcSet, AreaRegion, PolygonalCurve,
};
use crate::harmonic::HarmonicMap;
use crate::quadrature::gauss_kronrod;
use crate::scalar::{cis, to_f64, Real};

/// Right-hand side of the boundary-arc estimate,
/// `[L·m/(2π − m)]·[d₀(2π − m)/L]^{2π/m}`, evaluated in log form; the
/// limit `2π·d₀` is returned when `m > 2π − 1e-6`.
pub fn thm1_rhs(perimeter: f64, d0: f64, measure: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let eps = two_pi - measure;
    if eps < 1e-6 {
        return two_pi * d0;
    }
    ((perimeter * measure / eps).ln() + two_pi / measure * (d0 * eps / perimeter).ln()).exp()
}

/// `ℓ(f(E)) ≥ RHS(L, d₀, ℓ(E))` with `L` the perimeter proxy.
pub fn thm1_bound<T: Real>(
    map: &HarmonicMap<T>,
    e: &ArcSet<T>,
    cfg: &HarnessConfig<T>,
) -> Result<InequalityReport> {
    let measure = e.total_measure();
    if e.is_full() {
        return Err(Error::DegenerateE {
            measure: to_f64(measure),
        });
    }
    let origin = map.wirtinger(Complex::default())?;
    let d0 = origin.fz.norm() - origin.fzb.norm();
    if !(d0 > T::zero()) {
        return Err(Error::NotSensePreserving {
            re: 0.0,
            im: 0.0,
            jacobian: to_f64(origin.jacobian),
        });
    }
    let perimeter = boundary_image_length(map, &ArcSet::full(), &cfg.quad)?;
    let lhs = boundary_image_length(map, e, &cfg.quad)?;
    let m = to_f64(measure);
    let rhs = thm1_rhs(to_f64(perimeter.value), to_f64(d0), m);
    Ok(InequalityReport::ge("thm1", to_f64(lhs.value), rhs)
        .param("measure", m)
        .param("perimeter", to_f64(perimeter.value))
        .param("d0", to_f64(d0))
        .param("r_b", to_f64(perimeter.radius))
        .param(
            "limit_used",
            if 2.0 * std::f64::consts::PI - m < 1e-6 {
                1.0
            } else {
                0.0
            },
        )
        .probes(e.arcs().len()))
}

/// Inputs of the crosscut check.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm2Options<T: Real> {
    pub zeta0: Complex<T>,
    pub k: Option<T>,
    /// Overrides the Lavrentiev constant measured on the image polygon.
    pub m_lav: Option<T>,
    pub radii: Vec<T>,
}

/// `∫₀^r ℓ(f(Γ_ρ)) dρ ≤ √(KπA/3)·r^{3/2}·e^{−(α/2)(1/r − 1/2)} ≤ √(KπA/3)·r^{3/2}`
/// with `α = 4/[K(1 + M)²]`, plus fixed-rule cross-checks of the crosscut
/// integral and of the area, and the isoperimetric inequality on the image
/// polygon.
pub fn thm2_bound<T: Real>(
    map: &HarmonicMap<T>,
    opts: &Thm2Options<T>,
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    let q = &cfg.quad;
    let k = to_f64(resolve_k(map, opts.k, cfg)?.k);
    let poly = boundary_polygon(map, cfg.boundary_samples, q)?;
    let measured = lavrentiev_constant(&poly, 0, cfg.seed)?.value;
    let m_lav = match opts.m_lav {
        Some(m) if m < measured * (T::one() - T::epsilon().sqrt()) => {
            return Err(Error::param(
                "m_lav",
                format!("{m} is below the image polygon's Lavrentiev constant {measured}"),
            ))
        }
        Some(m) => to_f64(m),
        None => to_f64(measured),
    };
    let disk = AreaRegion::Disk { radius: T::one() };
    let area = image_area(map, disk, q)?;
    let n = cfg.fixed_nodes;
    let area_fixed = to_f64(image_area_fixed(map, disk, n, q)?);
    let area_fixed2 = to_f64(image_area_fixed(map, disk, 2 * n, q)?);
    let a = to_f64(area.value);
    let alpha = 4.0 / (k * (1.0 + m_lav).powi(2));
    let c = (k * std::f64::consts::PI * a / 3.0).sqrt();

    let mut reports = vec![
        InequalityReport::agree("thm2.area_crosscheck", a, area_fixed2, 1e-6)
            .param("fixed_n", area_fixed)
            .param("nodes", (2 * n) as f64),
        InequalityReport::agree("thm2.area_fixed_doubling", area_fixed, area_fixed2, 1e-6)
            .param("nodes", n as f64),
    ];
    for &r in &opts.radii {
        let lhs = crosscut_integral(map, opts.zeta0, r, q)?;
        let fixed = to_f64(crosscut_integral_fixed(map, opts.zeta0, r, n, q)?);
        let fixed2 = to_f64(crosscut_integral_fixed(map, opts.zeta0, r, 2 * n, q)?);
        let rf = to_f64(r);
        let top = c * rf.powf(1.5);
        let mid = top * (-(alpha / 2.0) * (1.0 / rf - 0.5)).exp();
        let lhs = to_f64(lhs.value);
        let tag = |rep: InequalityReport| {
            rep.param("r", rf)
                .param("K", k)
                .param("M_lav", m_lav)
                .param("area", a)
                .param("alpha", alpha)
        };
        reports.push(tag(InequalityReport::le("thm2.lower", lhs, mid)));
        reports.push(tag(InequalityReport::le("thm2.upper", mid, top)));
        reports.push(
            InequalityReport::agree("thm2.lhs_crosscheck", lhs, fixed2, 1e-6)
                .param("r", rf)
                .param("fixed_n", fixed)
                .param("nodes", (2 * n) as f64),
        );
        reports.push(
            InequalityReport::agree("thm2.lhs_fixed_doubling", fixed, fixed2, 1e-6)
                .param("r", rf)
                .param("nodes", n as f64),
        );
    }
    let mut iso = isoperimetric_check(&poly)?;
    iso.name = "thm2.isoperimetric".into();
    reports.push(iso);
    Ok(reports)
}

/// For each probe `z`, the mean of `‖D_f‖` over the boundary arc
/// `I(z) = {|arg ζ − arg z| ≤ π(1 − |z|)}` divided by `‖D_f(z)‖`. Returns
/// the largest ratio and one finiteness report per probe.
pub fn thm3_carleson<T: Real>(
    map: &HarmonicMap<T>,
    probes: &[Complex<T>],
    cfg: &HarnessConfig<T>,
) -> Result<(T, Vec<InequalityReport>)> {
    let q = &cfg.quad;
    let rc = map.clamp_radius(q.boundary_radius);
    let mut best = T::zero();
    let mut reports = Vec::with_capacity(probes.len());
    for &z in probes {
        let norm_z = map.wirtinger(z)?.op_norm;
        if norm_z < T::from(1e-14).unwrap_or_else(T::epsilon) {
            return Err(Error::DivisionDegenerate {
                radius: to_f64(z.norm()),
                value: to_f64(norm_z),
            });
        }
        let half = T::PI() * (T::one() - z.norm());
        let centre = z.arg();
        let integral = gauss_kronrod(
            |t| Ok(map.wirtinger(cis(t) * rc)?.op_norm),
            centre - half,
            centre + half,
            q.tolerance(),
            q.max_subdivisions,
            4,
            "boundary arc mean",
        )?;
        let ratio = integral.value / (half + half) / norm_z;
        best = best.max(ratio);
        reports.push(
            InequalityReport::finite("thm3.carleson", to_f64(ratio))
                .param("re", to_f64(z.re))
                .param("im", to_f64(z.im))
                .param("radius", to_f64(rc)),
        );
    }
    Ok((best, reports))
}

/// Smallest `M₁′` consistent with
/// `‖D_f(ρζ)‖ ≤ M₁′‖D_f(rζ)‖((1 − ρ)/(1 − r))^{δ−1}` over grid pairs
/// `r ≤ ρ`.
pub fn thm3_hypothesis_fit<T: Real>(
    map: &HarmonicMap<T>,
    zeta: Complex<T>,
    delta: T,
    radii: &[T],
) -> Result<(T, InequalityReport)> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::param(
            "delta",
            format!("must lie in (0, 1), got {delta}"),
        ));
    }
    let dir = zeta / zeta.norm();
    let mut norms = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r >= T::zero() && r < T::one()) {
            return Err(Error::param(
                "r_grid",
                format!("radii must lie in [0, 1), got {r}"),
            ));
        }
        let v = map.wirtinger(dir * r)?.op_norm;
        if v < T::from(1e-14).unwrap_or_else(T::epsilon) {
            return Err(Error::DivisionDegenerate {
                radius: to_f64(r),
                value: to_f64(v),
            });
        }
        norms.push(v);
    }
    let mut fit = T::zero();
    for (i, &r) in radii.iter().enumerate() {
        for (j, &rho) in radii.iter().enumerate() {
            if rho < r {
                continue;
            }
            let weight = ((T::one() - rho) / (T::one() - r)).powf(delta - T::one());
            fit = fit.max(norms[j] / (norms[i] * weight));
        }
    }
    let rep = InequalityReport::finite("thm3.hypothesis_fit", to_f64(fit))
        .param("delta", to_f64(delta))
        .param("zeta_arg", to_f64(dir.arg()))
        .probes(radii.len() * (radii.len() + 1) / 2);
    Ok((fit, rep))
}

/// Linear connectivity of the image domain against `2M₁ + 2`, with `M₁`
/// the Lavrentiev constant of the image polygon.
pub fn thm3_linear_connectivity<T: Real>(
    map: &HarmonicMap<T>,
    connectivity: &ConnectivityConfig,
    cfg: &HarnessConfig<T>,
) -> Result<InequalityReport> {
    let poly = boundary_polygon(map, cfg.boundary_samples, &cfg.quad)?;
    if let Some((first, second)) = poly.find_self_intersection() {
        return Err(Error::SelfIntersecting { first, second });
    }
    let m1 = lavrentiev_constant(&poly, 0, cfg.seed)?;
    let m2 = linear_connectivity_constant(&poly, connectivity, cfg.seed)?;
    Ok(InequalityReport::le(
        "thm3.linear_connectivity",
        to_f64(m2.value),
        2.0 * to_f64(m1.value) + 2.0,
    )
    .param("M1", to_f64(m1.value))
    .probes(m2.probes))
}

/// Shoelace area `≤ ℓ²/(4π)` for a simple closed polygon.
pub fn isoperimetric_check<T: Real>(curve: &PolygonalCurve<T>) -> Result<InequalityReport> {
    if !curve.is_closed() {
        return Err(Error::InvalidCurve(
            "isoperimetric check needs a closed curve".into(),
        ));
    }
    if let Some((first, second)) = curve.find_self_intersection() {
        return Err(Error::SelfIntersecting { first, second });
    }
    let area = to_f64(curve.signed_area().abs());
    let len = to_f64(curve.length());
    Ok(InequalityReport::le(
        "isoperimetric",
        area,
        len * len / (4.0 * std::f64::consts::PI),
    )
    .param("length", len)
    .probes(curve.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn cfg() -> HarnessConfig<f64> {
        HarnessConfig::default()
    }

    #[test]
    fn thm1_examples() {
        // Measure π, L = 2π, d₀ = 1: 2π·1·(1/2)² = π/2.
        assert!((thm1_rhs(2.0 * PI, 1.0, PI) - PI / 2.0).abs() < 1e-14);
        let e = ArcSet::centered(0.0, PI).unwrap();
        let rep = thm1_bound(&HarmonicMap::identity(), &e, &cfg()).unwrap();
        assert!(rep.holds && (rep.lhs - PI).abs() < 1e-5);
        let e = ArcSet::centered(1.0, 2.0 * PI - 0.01).unwrap();
        let rep = thm1_bound(&HarmonicMap::scaled_identity(1.0), &e, &cfg()).unwrap();
        assert!(rep.holds && (rep.lhs - (2.0 * PI - 0.01)).abs() < 1e-4);
        assert!(rep.rhs < rep.lhs && rep.rhs > 6.0);
        assert!(matches!(
            thm1_bound(&HarmonicMap::identity(), &ArcSet::full(), &cfg()),
            Err(Error::DegenerateE { .. })
        ));
    }

    #[test]
    fn isoperimetric_examples() {
        let circle = PolygonalCurve::regular(4096, Complex64::new(0.0, 0.0), 1.0).unwrap();
        let rep = isoperimetric_check(&circle).unwrap();
        assert!(rep.holds && (rep.lhs - rep.rhs).abs() < 1e-5);
        let c = Complex64::new;
        let square =
            PolygonalCurve::closed(vec![c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0)])
                .unwrap();
        let rep = isoperimetric_check(&square).unwrap();
        assert_eq!(rep.lhs, 4.0);
        assert!((rep.rhs - 16.0 / PI).abs() < 1e-14);
        let thin =
            PolygonalCurve::closed(vec![c(0.0, 0.0), c(10.0, 0.0), c(10.0, 0.01), c(0.0, 0.01)])
                .unwrap();
        assert!(isoperimetric_check(&thin).unwrap().margin > 7.0);
        let bowtie =
            PolygonalCurve::closed(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)])
                .unwrap();
        assert!(matches!(
            isoperimetric_check(&bowtie),
            Err(Error::SelfIntersecting { .. })
        ));
    }

    #[test]
    fn carleson_ratio_is_one_for_constant_norm() {
        let probes = [Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.9)];
        for map in [
            HarmonicMap::identity(),
            HarmonicMap::affine(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)),
        ] {
            let (m, reps) = thm3_carleson(&map, &probes, &cfg()).unwrap();
            assert!((m - 1.0).abs() < 1e-12);
            assert!(reps.iter().all(|r| r.holds));
        }
    }

    #[test]
    fn hypothesis_fit_examples() {
        let grid: Vec<f64> = (0..20).map(|k| k as f64 * 0.05).collect();
        let (fit, _) = thm3_hypothesis_fit(
            &HarmonicMap::identity(),
            Complex64::new(1.0, 0.0),
            0.3,
            &grid,
        )
        .unwrap();
        assert_eq!(fit, 1.0);
        let (fit, rep) = thm3_hypothesis_fit(
            &HarmonicMap::polynomial(0.3, 2),
            Complex64::new(0.0, 1.0),
            0.5,
            &grid,
        )
        .unwrap();
        assert!(fit.is_finite() && fit >= 1.0 && rep.holds);
    }

    #[test]
    fn thm2_identity_large_radii() {
        let opts = Thm2Options {
            zeta0: Complex64::new(1.0, 0.0),
            k: Some(1.0),
            m_lav: Some(PI / 2.0),
            radii: vec![0.5, 1.0, 2.0],
        };
        let reps = thm2_bound(&HarmonicMap::identity(), &opts, &cfg()).unwrap();
        for r in &reps {
            assert!(r.holds, "{r:?}");
        }
        let at2 = reps
            .iter()
            .find(|r| r.name == "thm2.upper" && r.params["r"] == 2.0)
            .unwrap();
        assert!((at2.rhs - (PI * PI / 3.0).sqrt() * 2f64.powf(1.5)).abs() < 1e-9);
    }
}
