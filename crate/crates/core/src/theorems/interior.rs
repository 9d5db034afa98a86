use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    check_increasing, radial_profile, resolve_k, sup_modulus, HarnessConfig, InequalityReport,
};
use crate::error::{Error, Result};
use crate::geometry::{
    boundary_polygon, extract_coefficients, level_curve_length, ring_norm_integral,
    sup_radial_length,
};
use crate::harmonic::HarmonicMap;
use crate::quadrature::{golden_section_max, periodic_mean};
use crate::scalar::{cis, from_usize, lit, to_f64, Real};

/// `(r/K)∫‖D_f‖ ≤ ℓ(γ_r) ≤ r∫‖D_f‖` on each ring, monotonicity of `ℓ(γ_r)`,
/// and finiteness of the Hardy-norm and perimeter proxies.
pub fn check_prop1<T: Real>(
    map: &HarmonicMap<T>,
    k: Option<T>,
    radii: &[T],
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    check_increasing("radii", radii, map.interior_limit())?;
    let k = resolve_k(map, k, cfg)?.k;
    let q = &cfg.quad;
    let rows: Vec<Result<(T, T, T)>> = radii
        .par_iter()
        .map(|&r| {
            Ok((
                r,
                level_curve_length(map, r, q)?.value,
                ring_norm_integral(map, r, q)?.value,
            ))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut reports = Vec::new();
    let kf = to_f64(k);
    let mut hardy = 0.0f64;
    for &(r, len, norm) in &rows {
        let (rf, len, norm) = (to_f64(r), to_f64(len), to_f64(norm));
        reports.push(
            InequalityReport::ge("prop1.lower", len, rf / kf * norm)
                .param("r", rf)
                .param("K", kf),
        );
        reports.push(InequalityReport::le("prop1.upper", len, rf * norm).param("r", rf));
        hardy = hardy.max(norm / (2.0 * std::f64::consts::PI));
    }
    for pair in rows.windows(2) {
        let (r0, l0, _) = pair[0];
        let (r1, l1, _) = pair[1];
        reports.push(
            InequalityReport::ge("prop1.monotone", to_f64(l1), to_f64(l0))
                .param("r_lo", to_f64(r0))
                .param("r_hi", to_f64(r1)),
        );
    }
    let perimeter = level_curve_length(map, q.boundary_radius, q)?.value;
    reports.push(InequalityReport::finite("prop1.hardy_norm", hardy).probes(rows.len()));
    reports.push(
        InequalityReport::finite("prop1.perimeter", to_f64(perimeter))
            .param("r_b", to_f64(q.boundary_radius)),
    );
    Ok(reports)
}

fn sweep_angles<T: Real>(n: usize) -> Vec<T> {
    let two_pi = T::PI() + T::PI();
    (0..n)
        .map(|k| two_pi * from_usize(k) / from_usize(n))
        .collect()
}

/// `ℓ*_F(θ, r) ≤ M·r` for `F(ζ) = f(r₀ζ)` over a θ × r grid, with
/// `M = (2/π)·sup|f|·log((1+r₀)/(1−r₀))` (binding). The smaller constant
/// `r₀·M` is reported as well, informationally.
pub fn prop2_bound<T: Real>(
    map: &HarmonicMap<T>,
    r0: T,
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    let f = map.rescale(r0)?;
    let sup = to_f64(sup_modulus(map, cfg)?);
    let r0f = to_f64(r0);
    let m = 2.0 / std::f64::consts::PI * sup * ((1.0 + r0f) / (1.0 - r0f)).ln();
    let radii: Vec<T> = (1..=16).map(|k| from_usize::<T>(k) / lit(16.0)).collect();
    let angles = sweep_angles::<T>(cfg.sweep_theta_grid);
    let profiles: Vec<Result<Vec<T>>> = angles
        .par_iter()
        .map(|&theta| {
            radial_profile(
                |z| Ok(f.wirtinger(z)?.radial_stretch(theta)),
                theta,
                &radii,
                &cfg.quad,
            )
        })
        .collect();
    let mut worst = 0.0f64;
    for p in profiles {
        for (len, r) in p?.into_iter().zip(&radii) {
            worst = worst.max(to_f64(len / *r));
        }
    }
    let probes = angles.len() * radii.len();
    Ok(vec![
        InequalityReport::le("prop2", worst, m)
            .param("r0", r0f)
            .param("sup_modulus", sup)
            .probes(probes),
        InequalityReport::le("prop2.scaled_constant", worst, r0f * m)
            .param("r0", r0f)
            .param("sup_modulus", sup)
            .probes(probes)
            .informational(),
    ])
}

/// `|aₙ| + |bₙ| ≤ K·M_rad` for `1 ≤ n ≤ n_max` with
/// `M_rad = sup_θ ℓ*_f(θ, 1)`, plus the equality `|a₁| = M_rad` when
/// `K = 1` and the map is a multiple of `z`.
pub fn thm5_bound<T: Real>(
    map: &HarmonicMap<T>,
    k: Option<T>,
    n_max: usize,
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    if n_max == 0 {
        return Err(Error::param("n_max", "must be at least 1"));
    }
    let k = to_f64(resolve_k(map, k, cfg)?.k);
    let (theta, m_rad) = sup_radial_length(map, T::one(), &cfg.quad)?;
    let m_rad = to_f64(m_rad);
    let co = extract_coefficients(map, n_max, lit(0.5), &cfg.quad)?;
    let size = |n: usize| to_f64(co.a[n].norm() + co.b[n].norm());
    let mut reports: Vec<InequalityReport> = (1..=n_max)
        .map(|n| {
            InequalityReport::le("thm5", size(n), k * m_rad)
                .param("n", n as f64)
                .param("K", k)
                .param("M_rad", m_rad)
                .param("theta_star", to_f64(theta))
        })
        .collect();
    let linear = to_f64(co.a[0].norm()) < 1e-9
        && to_f64(co.b[1].norm()) < 1e-9
        && (2..=n_max).all(|n| size(n) < 1e-9);
    if (k - 1.0).abs() < 1e-12 && linear {
        reports.push(
            InequalityReport::eq_rel("thm5.sharpness", to_f64(co.a[1].norm()), k * m_rad, 1e-8)
                .param("K", k)
                .param("M_rad", m_rad),
        );
    }
    Ok(reports)
}

/// `ℓ*_f(θ*, r)/ℓ(γ_r) ≤ 32r(1+r)K³·sup|f| / ∫d_D(f(re^{it}))dt` at each
/// radius, a nonincreasing trend of the ratio toward small `r`, and the
/// ratio at the smallest radius against `threshold` (informational).
pub fn thm4_ratio<T: Real>(
    map: &HarmonicMap<T>,
    k: Option<T>,
    radii: &[T],
    threshold: f64,
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    let q = &cfg.quad;
    let k = to_f64(resolve_k(map, k, cfg)?.k);
    let sup = to_f64(sup_modulus(map, cfg)?);
    let poly = boundary_polygon(map, cfg.boundary_samples, q)?;
    let two_pi = T::PI() + T::PI();
    let mut reports = Vec::new();
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    for &r in radii {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::param(
                "radii",
                format!("must lie in (0, 1), got {r}"),
            ));
        }
        let (theta, lstar) = sup_radial_length(map, r, q)?;
        let len = level_curve_length(map, r, q)?.value;
        let dist = periodic_mean(
            |t| Ok(poly.distance_to(map.ring_sample(r, t)?.0)),
            q.theta_grid,
            two_pi,
        )? * two_pi;
        let rf = to_f64(r);
        let lhs = to_f64(lstar / len);
        let rhs = 32.0 * rf * (1.0 + rf) * k.powi(3) * sup / to_f64(dist);
        reports.push(
            InequalityReport::le("thm4", lhs, rhs)
                .param("r", rf)
                .param("K", k)
                .param("theta_star", to_f64(theta))
                .param("sup_modulus", sup)
                .param("distance_integral", to_f64(dist)),
        );
        ratios.push((rf, lhs));
    }
    ratios.sort_by(|a, b| b.0.total_cmp(&a.0));
    for pair in ratios.windows(2) {
        reports.push(
            InequalityReport::le("thm4.trend", pair[1].1, pair[0].1)
                .param("r_small", pair[1].0)
                .param("r_large", pair[0].0),
        );
    }
    if let Some(&(r, ratio)) = ratios.last() {
        reports.push(
            InequalityReport::le("thm4.limit", ratio, threshold)
                .param("r", r)
                .informational(),
        );
    }
    Ok(reports)
}

/// Radial Schwarz-type bound for `φ = ‖D_f‖`: with `A(r) = sup_θ ∫₀^r φ(ρe^{iθ}) dρ / N`
/// and `N = A(R)` (or the given normalization), checks `A(r) ≤ r/R` where
/// `R` is the largest radius at which derivatives are available.
pub fn schwarz_radial_check<T: Real>(
    map: &HarmonicMap<T>,
    normalization: Option<T>,
    radii: &[T],
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    let big_r = map.interior_limit();
    check_increasing("radii", radii, big_r)?;
    let q = &cfg.quad;
    let mut grid = radii.to_vec();
    if *grid.last().expect("nonempty radii") < big_r {
        grid.push(big_r);
    }
    let norm = |z: Complex<T>| Ok(map.wirtinger(z)?.op_norm);
    let angles = sweep_angles::<T>(cfg.sweep_theta_grid);
    let profiles: Vec<Result<Vec<T>>> = angles
        .par_iter()
        .map(|&th| radial_profile(norm, th, &grid, q))
        .collect();
    let profiles = profiles.into_iter().collect::<Result<Vec<_>>>()?;
    // Grid maximum per radius, refined in θ by golden section.
    let h = angles.get(1).copied().unwrap_or(T::PI() + T::PI());
    let sups: Vec<Result<T>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (best, arg) =
                profiles
                    .iter()
                    .enumerate()
                    .fold((T::neg_infinity(), 0), |acc, (j, p)| {
                        if p[i] > acc.0 {
                            (p[i], j)
                        } else {
                            acc
                        }
                    });
            let r = grid[i];
            let (_, refined) = golden_section_max(
                |th| Ok(radial_profile(norm, th, &[r], q)?[0]),
                angles[arg] - h,
                angles[arg] + h,
                lit(1e-10),
                100,
            )?;
            Ok(best.max(refined))
        })
        .collect();
    let sups = sups.into_iter().collect::<Result<Vec<_>>>()?;
    let at_big = *sups.last().expect("nonempty");
    let n = normalization.unwrap_or(at_big);
    if !(n > T::zero()) {
        return Err(Error::param(
            "normalization",
            format!("must be positive, got {n}"),
        ));
    }
    let bf = to_f64(big_r);
    let mut reports = Vec::with_capacity(radii.len());
    for (r, s) in grid.iter().zip(&sups).take(radii.len()) {
        let a = to_f64(*s / n);
        if a > 1.0 + 1e-9 {
            return Err(Error::NormalizationViolation {
                radius: to_f64(*r),
                value: a,
            });
        }
        reports.push(
            InequalityReport::le("schwarz", a, to_f64(*r) / bf)
                .param("r", to_f64(*r))
                .param("normalization", to_f64(n))
                .param("R", bf)
                .probes(angles.len()),
        );
    }
    if to_f64(at_big / n) > 1.0 + 1e-9 {
        return Err(Error::NormalizationViolation {
            radius: bf,
            value: to_f64(at_big / n),
        });
    }
    Ok(reports)
}

/// `(1+K)/(2K)·Q ≤ |f_z| ≤ (K+1)/2·Q` with `Q = (1−|f|²)/(1−|z|²)` at
/// seeded probes in `|z| ≤ 0.95`; one report per side at its worst probe.
pub fn selfmap_distortion_check<T: Real>(
    map: &HarmonicMap<T>,
    k: Option<T>,
    probes: usize,
    cfg: &HarnessConfig<T>,
) -> Result<Vec<InequalityReport>> {
    let k = to_f64(resolve_k(map, k, cfg)?.k);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<Complex<T>> = (0..probes.max(1))
        .map(|_| {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            cis(lit::<T>(2.0 * std::f64::consts::PI * v)) * lit::<T>(0.95 * u.sqrt())
        })
        .collect();
    let rows: Vec<Result<(Complex<T>, f64, f64)>> = points
        .par_iter()
        .map(|&z| {
            let w = map.evaluate(z)?;
            if !(w.norm() < T::one()) {
                return Err(Error::NotSelfMap {
                    re: to_f64(z.re),
                    im: to_f64(z.im),
                    modulus: to_f64(w.norm()),
                });
            }
            let quotient = to_f64((T::one() - w.norm_sqr()) / (T::one() - z.norm_sqr()));
            Ok((z, to_f64(map.wirtinger(z)?.fz.norm()), quotient))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let lower = rows
        .iter()
        .map(|&(z, fz, q)| (z, fz, (1.0 + k) / (2.0 * k) * q))
        .min_by(|a, b| (a.1 - a.2).total_cmp(&(b.1 - b.2)))
        .expect("nonempty probes");
    let upper = rows
        .iter()
        .map(|&(z, fz, q)| (z, fz, (k + 1.0) / 2.0 * q))
        .min_by(|a, b| (a.2 - a.1).total_cmp(&(b.2 - b.1)))
        .expect("nonempty probes");
    let tag = |rep: InequalityReport, z: Complex<T>| {
        rep.param("re", to_f64(z.re))
            .param("im", to_f64(z.im))
            .param("K", k)
            .probes(rows.len())
    };
    Ok(vec![
        tag(
            InequalityReport::ge("selfmap.lower", lower.1, lower.2),
            lower.0,
        ),
        tag(
            InequalityReport::le("selfmap.upper", upper.1, upper.2),
            upper.0,
        ),
    ])
}
