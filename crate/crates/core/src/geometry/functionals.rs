use std::cell::Cell;

use num_complex::Complex;
use rayon::prelude::*;

use super::{ArcSet, PolygonalCurve, QuadratureConfig};
use crate::error::{Error, Result};
use crate::harmonic::HarmonicMap;
use crate::quadrature::{composite_gauss_legendre, gauss_kronrod, grid_refined_max, Estimate};
use crate::scalar::{cis, compensated_sum, from_usize, lit, to_f64, unit_root, Real};

/// Trapezoid node count for coefficient extraction.
pub const COEFFICIENT_NODES: usize = 1 << 13;

/// Order of the Gauss–Legendre panels used by the fixed-rule cross-checks.
pub const FIXED_RULE_ORDER: usize = 16;

fn two_pi<T: Real>() -> T {
    T::PI() + T::PI()
}

fn open_unit(name: &'static str, r: impl Real) -> Result<()> {
    if !(r > num_traits::zero() && r < num_traits::one()) {
        return Err(Error::param(name, format!("must lie in (0, 1), got {r}")));
    }
    Ok(())
}

fn half_open_unit(name: &'static str, r: impl Real) -> Result<()> {
    if !(r > num_traits::zero() && r <= num_traits::one()) {
        return Err(Error::param(name, format!("must lie in (0, 1], got {r}")));
    }
    Ok(())
}

/// `ℓ(f(|z| = r)) = ∫₀^{2π} |∂_t f(re^{it})| dt`.
pub fn level_curve_length<T: Real>(
    map: &HarmonicMap<T>,
    r: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>> {
    cfg.validate()?;
    open_unit("r", r)?;
    gauss_kronrod(
        |t| map.ring_speed(r, t),
        T::zero(),
        two_pi(),
        cfg.tolerance(),
        cfg.max_subdivisions,
        8,
        "level curve length",
    )
}

/// `∫₀^{2π} ‖D_f(re^{it})‖ dt`.
pub fn ring_norm_integral<T: Real>(
    map: &HarmonicMap<T>,
    r: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>> {
    cfg.validate()?;
    open_unit("r", r)?;
    gauss_kronrod(
        |t| Ok(map.wirtinger(cis(t) * r)?.op_norm),
        T::zero(),
        two_pi(),
        cfg.tolerance(),
        cfg.max_subdivisions,
        8,
        "operator norm ring integral",
    )
}

/// Length of `f(E)` measured at the proxy radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryLength<T> {
    pub value: T,
    pub error: T,
    /// Radius at which the arcs were traced.
    pub radius: T,
    pub evals: usize,
}

/// `Σ ∫_{αᵢ}^{βᵢ} |∂_t f(r_b e^{it})| dt`.
pub fn boundary_image_length<T: Real>(
    map: &HarmonicMap<T>,
    e: &ArcSet<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<BoundaryLength<T>> {
    cfg.validate()?;
    let rb = cfg.boundary_radius;
    let mut parts = Vec::with_capacity(e.arcs().len());
    for &(alpha, beta) in e.arcs() {
        let panels = (to_f64((beta - alpha) / two_pi::<T>()) * 8.0)
            .ceil()
            .max(1.0) as usize;
        parts.push(gauss_kronrod(
            |t| map.ring_speed(rb, t),
            alpha,
            beta,
            cfg.tolerance(),
            cfg.max_subdivisions,
            panels,
            "boundary image length",
        )?);
    }
    Ok(BoundaryLength {
        value: compensated_sum(parts.iter().map(|p| p.value)),
        error: compensated_sum(parts.iter().map(|p| p.error)),
        radius: rb,
        evals: parts.iter().map(|p| p.evals).sum(),
    })
}

/// `ℓ*_f(θ, r) = ∫₀^r |f_z(ρe^{iθ}) + e^{−2iθ} f_z̄(ρe^{iθ})| dρ` for
/// `r ∈ (0, 1]`.
///
/// When `r` exceeds the map's interior limit the stretch at that limit is
/// held constant over the remaining piece of the radius.
pub fn radial_length<T: Real>(
    map: &HarmonicMap<T>,
    theta: T,
    r: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>> {
    cfg.validate()?;
    half_open_unit("r", r)?;
    let dir = cis(theta);
    let stretch = |rho: T| -> Result<T> { Ok(map.wirtinger(dir * rho)?.radial_stretch(theta)) };
    let limit = map.interior_limit();
    if r <= limit {
        return gauss_kronrod(
            stretch,
            T::zero(),
            r,
            cfg.tolerance(),
            cfg.max_subdivisions,
            1,
            "radial length",
        );
    }
    let inner_edge = limit * (T::one() - lit(1e-12));
    let mut est = gauss_kronrod(
        stretch,
        T::zero(),
        inner_edge,
        cfg.tolerance(),
        cfg.max_subdivisions,
        1,
        "radial length",
    )?;
    est.value += stretch(inner_edge)? * (r - inner_edge);
    est.evals += 1;
    Ok(est)
}

/// `sup_θ ℓ*_f(θ, r)` as `(θ*, value)`.
pub fn sup_radial_length<T: Real>(
    map: &HarmonicMap<T>,
    r: T,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T)> {
    cfg.validate()?;
    half_open_unit("r", r)?;
    grid_refined_max(
        |theta| Ok(radial_length(map, theta, r, cfg)?.value),
        T::zero(),
        two_pi(),
        cfg.theta_grid,
        true,
    )
}

/// The arc `Γ_ρ = {ζ₀ + ρe^{it}} ∩ D`, clipped to the usable radius.
///
/// Parametrized by `s ∈ [−half_angle, half_angle]` as
/// `z(s) = ζ₀(1 − ρe^{is})`, i.e. angle `s` measured from the inward
/// direction `−ζ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crosscut<T: Real> {
    pub zeta0: Complex<T>,
    pub rho: T,
    pub half_angle: T,
    /// Radius the arc was clipped to.
    pub clip_radius: T,
}

impl<T: Real> Crosscut<T> {
    pub fn new(
        map: &HarmonicMap<T>,
        zeta0: Complex<T>,
        rho: T,
        cfg: &QuadratureConfig<T>,
    ) -> Result<Self> {
        let zeta0 = unimodular(zeta0)?;
        if !(rho > T::zero() && rho <= lit(2.0)) {
            return Err(Error::param(
                "rho",
                format!("must lie in (0, 2], got {rho}"),
            ));
        }
        let clip = cfg
            .boundary_radius
            .min(map.interior_limit() * (T::one() - lit(1e-12)));
        let bound = (T::one() + rho * rho - clip * clip) / (rho + rho);
        if bound >= T::one() {
            return Err(Error::EmptyCrosscut { rho: to_f64(rho) });
        }
        Ok(Self {
            zeta0,
            rho,
            half_angle: bound.max(-T::one()).acos(),
            clip_radius: clip,
        })
    }

    pub fn point(&self, s: T) -> Complex<T> {
        self.zeta0 * (Complex::new(T::one(), T::zero()) - cis(s) * self.rho)
    }

    pub fn velocity(&self, s: T) -> Complex<T> {
        self.zeta0 * cis(s) * Complex::new(T::zero(), -self.rho)
    }

    /// Euclidean length of the unclipped arc, `2ρ·arccos(ρ/2)`.
    pub fn nominal_length(&self) -> T {
        (self.rho + self.rho) * (self.rho * lit(0.5)).min(T::one()).acos()
    }
}

fn unimodular<T: Real>(zeta0: Complex<T>) -> Result<Complex<T>> {
    let m = zeta0.norm();
    if !((m - T::one()).abs() <= lit(1e-9)) {
        return Err(Error::param(
            "zeta0",
            format!("must be unimodular, |ζ₀| = {m}"),
        ));
    }
    Ok(zeta0 / m)
}

fn crosscut_speed<T: Real>(map: &HarmonicMap<T>, arc: &Crosscut<T>, s: T) -> Result<T> {
    let frame = map.wirtinger(arc.point(s))?;
    let v = arc.velocity(s);
    Ok((frame.fz * v + frame.fzb * v.conj()).norm())
}

/// `ℓ(f(Γ_ρ))`.
pub fn crosscut_length<T: Real>(
    map: &HarmonicMap<T>,
    zeta0: Complex<T>,
    rho: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>> {
    cfg.validate()?;
    let arc = Crosscut::new(map, zeta0, rho, cfg)?;
    gauss_kronrod(
        |s| crosscut_speed(map, &arc, s),
        -arc.half_angle,
        arc.half_angle,
        cfg.tolerance(),
        cfg.max_subdivisions,
        4,
        "crosscut length",
    )
}

fn check_lens_radius<T: Real>(r: T) -> Result<()> {
    if !(r > T::zero() && r <= lit(2.0)) {
        return Err(Error::param("r", format!("must lie in (0, 2], got {r}")));
    }
    Ok(())
}

// ρ = 2 sin φ removes the square-root behaviour of the arc at ρ = 2.
fn lens_angle<T: Real>(r: T) -> T {
    (r * lit(0.5)).min(T::one()).asin()
}

/// `∫₀^r ℓ(f(Γ_ρ)) dρ`; empty crosscuts contribute zero.
pub fn crosscut_integral<T: Real>(
    map: &HarmonicMap<T>,
    zeta0: Complex<T>,
    r: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>> {
    cfg.validate()?;
    check_lens_radius(r)?;
    let zeta0 = unimodular(zeta0)?;
    let inner_error = Cell::new(T::zero());
    let inner_evals = Cell::new(0usize);
    let mut est = gauss_kronrod(
        |phi: T| {
            let rho = lit::<T>(2.0) * phi.sin();
            if rho <= T::zero() {
                return Ok(T::zero());
            }
            match crosscut_length(map, zeta0, rho, cfg) {
                Ok(inner) => {
                    inner_error.set(inner_error.get().max(inner.error));
                    inner_evals.set(inner_evals.get() + inner.evals);
                    Ok(inner.value * lit(2.0) * phi.cos())
                }
                Err(Error::EmptyCrosscut { .. }) => Ok(T::zero()),
                Err(e) => Err(e),
            }
        },
        T::zero(),
        lens_angle(r),
        cfg.tolerance(),
        cfg.max_subdivisions,
        2,
        "crosscut integral",
    )?;
    est.error += inner_error.get() * r;
    est.evals += inner_evals.get();
    Ok(est)
}

/// Fixed product Gauss–Legendre version of [`crosscut_integral`] with
/// `nodes` points per axis, used to cross-check the adaptive value.
pub fn crosscut_integral_fixed<T: Real>(
    map: &HarmonicMap<T>,
    zeta0: Complex<T>,
    r: T,
    nodes: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    lens_fixed(map, zeta0, r, nodes, cfg, |map, arc, s| {
        crosscut_speed(map, arc, s)
    })
}

fn fixed_layout(nodes: usize) -> (usize, usize) {
    let order = nodes.clamp(1, FIXED_RULE_ORDER);
    ((nodes / order).max(1), order)
}

// ∫₀^{asin(r/2)} 2cos φ ∫_{−h}^{h} g(s) ds dφ with product Gauss–Legendre.
fn lens_fixed<T: Real>(
    map: &HarmonicMap<T>,
    zeta0: Complex<T>,
    r: T,
    nodes: usize,
    cfg: &QuadratureConfig<T>,
    g: impl Fn(&HarmonicMap<T>, &Crosscut<T>, T) -> Result<T>,
) -> Result<T> {
    cfg.validate()?;
    check_lens_radius(r)?;
    let zeta0 = unimodular(zeta0)?;
    let (panels, order) = fixed_layout(nodes);
    composite_gauss_legendre(
        |phi: T| {
            let rho = lit::<T>(2.0) * phi.sin();
            if rho <= T::zero() {
                return Ok(T::zero());
            }
            let arc = match Crosscut::new(map, zeta0, rho, cfg) {
                Ok(arc) => arc,
                Err(Error::EmptyCrosscut { .. }) => return Ok(T::zero()),
                Err(e) => return Err(e),
            };
            let inner = composite_gauss_legendre(
                |s| g(map, &arc, s),
                -arc.half_angle,
                arc.half_angle,
                panels,
                order,
            )?;
            Ok(inner * lit(2.0) * phi.cos())
        },
        T::zero(),
        lens_angle(r),
        panels,
        order,
    )
}

/// Region of the disk whose image area is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaRegion<T> {
    /// `|z| < radius`, `radius ∈ (0, 1]`.
    Disk { radius: T },
    /// `Δ_r = {|z − ζ₀| ≤ radius} ∩ D`, `radius ∈ (0, 2]`.
    Lens { zeta0: Complex<T>, radius: T },
}

/// `∬_region J_f dA` (area with multiplicity).
///
/// For a disk beyond the map's interior limit the area is computed from the
/// boundary trace by Green's formula, `½∮ Im(conj(f)·∂_t f) dt`.
pub fn image_area<T: Real>(
    map: &HarmonicMap<T>,
    region: AreaRegion<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>> {
    cfg.validate()?;
    let tol = cfg.tolerance();
    match region {
        AreaRegion::Disk { radius } => {
            half_open_unit("radius", radius)?;
            if radius > map.interior_limit() {
                let est = gauss_kronrod(
                    |t| {
                        let (v, d) = map.ring_sample(radius, t)?;
                        Ok((v.conj() * d).im * lit(0.5))
                    },
                    T::zero(),
                    two_pi(),
                    tol,
                    cfg.max_subdivisions,
                    16,
                    "image area (Green)",
                )?;
                return Ok(est);
            }
            let inner_error = Cell::new(T::zero());
            let inner_evals = Cell::new(0usize);
            let mut est = gauss_kronrod(
                |rho: T| {
                    let ring = gauss_kronrod(
                        |t| Ok(map.wirtinger(cis(t) * rho)?.jacobian),
                        T::zero(),
                        two_pi(),
                        tol,
                        cfg.max_subdivisions,
                        8,
                        "image area",
                    )?;
                    inner_error.set(inner_error.get().max(ring.error));
                    inner_evals.set(inner_evals.get() + ring.evals);
                    Ok(ring.value * rho)
                },
                T::zero(),
                radius,
                tol,
                cfg.max_subdivisions,
                1,
                "image area",
            )?;
            est.error += inner_error.get() * radius;
            est.evals += inner_evals.get();
            Ok(est)
        }
        AreaRegion::Lens { zeta0, radius } => {
            check_lens_radius(radius)?;
            let zeta0 = unimodular(zeta0)?;
            let inner_error = Cell::new(T::zero());
            let inner_evals = Cell::new(0usize);
            let mut est = gauss_kronrod(
                |phi: T| {
                    let rho = lit::<T>(2.0) * phi.sin();
                    if rho <= T::zero() {
                        return Ok(T::zero());
                    }
                    let arc = match Crosscut::new(map, zeta0, rho, cfg) {
                        Ok(arc) => arc,
                        Err(Error::EmptyCrosscut { .. }) => return Ok(T::zero()),
                        Err(e) => return Err(e),
                    };
                    let inner = gauss_kronrod(
                        |s| Ok(map.wirtinger(arc.point(s))?.jacobian),
                        -arc.half_angle,
                        arc.half_angle,
                        tol,
                        cfg.max_subdivisions,
                        4,
                        "lens image area",
                    )?;
                    inner_error.set(inner_error.get().max(inner.error));
                    inner_evals.set(inner_evals.get() + inner.evals);
                    Ok(inner.value * rho * lit(2.0) * phi.cos())
                },
                T::zero(),
                lens_angle(radius),
                tol,
                cfg.max_subdivisions,
                2,
                "lens image area",
            )?;
            est.error += inner_error.get() * radius * radius;
            est.evals += inner_evals.get();
            Ok(est)
        }
    }
}

/// Fixed product Gauss–Legendre version of the lens area.
pub fn lens_area_fixed<T: Real>(
    map: &HarmonicMap<T>,
    zeta0: Complex<T>,
    r: T,
    nodes: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    lens_fixed(map, zeta0, r, nodes, cfg, |map, arc, s| {
        Ok(map.wirtinger(arc.point(s))?.jacobian * arc.rho)
    })
}

/// Fixed Gauss–Legendre version of [`image_area`] with `nodes` points per
/// axis (Green's formula on the trace beyond the interior limit).
pub fn image_area_fixed<T: Real>(
    map: &HarmonicMap<T>,
    region: AreaRegion<T>,
    nodes: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    cfg.validate()?;
    let (panels, order) = fixed_layout(nodes);
    match region {
        AreaRegion::Disk { radius } => {
            half_open_unit("radius", radius)?;
            if radius > map.interior_limit() {
                return composite_gauss_legendre(
                    |t| {
                        let (v, d) = map.ring_sample(radius, t)?;
                        Ok((v.conj() * d).im * lit(0.5))
                    },
                    T::zero(),
                    two_pi(),
                    panels,
                    order,
                );
            }
            composite_gauss_legendre(
                |rho: T| {
                    let ring = composite_gauss_legendre(
                        |t| Ok(map.wirtinger(cis(t) * rho)?.jacobian),
                        T::zero(),
                        two_pi(),
                        panels,
                        order,
                    )?;
                    Ok(ring * rho)
                },
                T::zero(),
                radius,
                panels,
                order,
            )
        }
        AreaRegion::Lens { zeta0, radius } => lens_area_fixed(map, zeta0, radius, nodes, cfg),
    }
}

/// `M_p(r, F) = [(1/2π) ∫₀^{2π} |F(re^{iθ})|^p dθ]^{1/p}` for a scalar
/// field `F` on the disk.
pub fn hardy_mean<T: Real, F>(
    field: F,
    p: T,
    r: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Estimate<T, T>>
where
    F: Fn(Complex<T>) -> Result<T>,
{
    cfg.validate()?;
    open_unit("r", r)?;
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::param("p", format!("must be positive, got {p}")));
    }
    let tp = two_pi::<T>();
    let est = gauss_kronrod(
        |t| Ok(field(cis(t) * r)?.abs().powf(p)),
        T::zero(),
        tp,
        cfg.tolerance(),
        cfg.max_subdivisions,
        8,
        "Hardy mean",
    )?;
    let mean = est.value / tp;
    let value = mean.powf(p.recip());
    let error = if mean > T::zero() {
        est.error / tp * value / (mean * p)
    } else {
        est.error
    };
    Ok(Estimate {
        value,
        error,
        evals: est.evals,
    })
}

/// Taylor coefficients recovered from derivative samples on one circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients<T> {
    /// `a₀ … a_{n_max}`
    pub a: Vec<Complex<T>>,
    /// `b₀ = 0, b₁ … b_{n_max}`
    pub b: Vec<Complex<T>>,
    pub rho: T,
    pub nodes: usize,
    /// Largest disagreement between the full and half node sets.
    pub discrepancy: T,
}

type Pick<T> = fn(&(Complex<T>, Complex<T>)) -> Complex<T>;

/// `n aₙ = (1/2πi)∮ f_z z^{−n} dz`, `n bₙ = (1/2πi)∮ conj(f_z̄) z^{−n} dz` on
/// `|z| = ρ` by the trapezoid rule; `a₀ = f(0)`.
pub fn extract_coefficients<T: Real>(
    map: &HarmonicMap<T>,
    n_max: usize,
    rho: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Coefficients<T>> {
    cfg.validate()?;
    open_unit("rho", rho)?;
    let n = COEFFICIENT_NODES;
    let samples: Vec<Result<(Complex<T>, Complex<T>)>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let frame = map.wirtinger(unit_root::<T>(k, n) * rho)?;
            Ok((frame.fz, frame.fzb.conj()))
        })
        .collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    let roots: Vec<Complex<T>> = (0..n).map(|j| unit_root::<T>(j, n).conj()).collect();
    let peak = samples
        .iter()
        .map(|(p, q)| p.norm().max(q.norm()))
        .fold(T::zero(), T::max);
    let floor = lit::<T>(64.0) * map.sample_accuracy().max(T::epsilon()) * peak.max(T::one());

    let mut a = vec![map.evaluate(Complex::default())?];
    let mut b = vec![Complex::default()];
    let mut discrepancy = T::zero();
    for m in 1..=n_max {
        let shift = m - 1;
        let mean = |stride: usize, pick: Pick<T>| {
            let count = n / stride;
            let total = compensated_sum((0..count).map(|i| {
                let k = i * stride;
                pick(&samples[k]) * roots[(k * shift) % n]
            }));
            total / from_usize::<T>(count)
        };
        let factor = rho.powi(1 - m as i32) / from_usize::<T>(m);
        let picks: [Pick<T>; 2] = [|s| s.0, |s| s.1];
        for (pick, out) in picks.into_iter().zip([&mut a, &mut b]) {
            let fine = mean(1, pick) * factor;
            let coarse = mean(2, pick) * factor;
            let diff = (fine - coarse).norm();
            let allowed = cfg.abs_tol + cfg.rel_tol * fine.norm() + floor * factor;
            if diff > allowed {
                return Err(Error::QuadratureNonconvergence {
                    what: "coefficient extraction",
                    subdivisions: n,
                    error_estimate: to_f64(diff),
                });
            }
            discrepancy = discrepancy.max(diff);
            out.push(fine);
        }
    }
    Ok(Coefficients {
        a,
        b,
        rho,
        nodes: n,
        discrepancy,
    })
}

/// Closed polygon through `f(r e^{2πik/samples})`.
pub fn image_polygon<T: Real>(
    map: &HarmonicMap<T>,
    r: T,
    samples: usize,
) -> Result<PolygonalCurve<T>> {
    half_open_unit("r", r)?;
    let tp = two_pi::<T>();
    let vertices: Vec<Result<Complex<T>>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            Ok(map
                .ring_sample(r, tp * from_usize(k) / from_usize(samples))?
                .0)
        })
        .collect();
    PolygonalCurve::closed(vertices.into_iter().collect::<Result<Vec<_>>>()?)
}

/// Polygonal approximation of `f(r_b·T)`.
pub fn boundary_polygon<T: Real>(
    map: &HarmonicMap<T>,
    samples: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<PolygonalCurve<T>> {
    cfg.validate()?;
    image_polygon(map, cfg.boundary_radius, samples)
}

/// Distance from `w` to the polygonal image of the proxy circle.
pub fn distance_to_boundary<T: Real>(
    map: &HarmonicMap<T>,
    w: Complex<T>,
    samples: usize,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    Ok(boundary_polygon(map, samples, cfg)?.distance_to(w))
}
