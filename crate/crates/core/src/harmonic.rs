//! Harmonic mappings of the unit disk and their pointwise derivative data.
//!
//! A harmonic map is stored as `f = h + conj(g)` in one of a few concrete
//! representations. All representations are immutable after construction and
//! expose the same operations: evaluation, Wirtinger derivatives, and samples
//! along circles `|z| = r` (including a boundary trace where interior
//! evaluation is refused).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{golden_section_max, simpson_adaptive};
use crate::scalar::{cis, from_usize, lit, to_f64, Real};

/// Default truncation degree for series maps built by the crate.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Largest modulus at which a Poisson integral map is evaluated; closer to
/// the circle the kernel peak defeats the quadrature tolerance.
pub const POISSON_MAX_RADIUS: f64 = 0.999;

/// Number of points used to validate a boundary phase.
pub const PHASE_CHECK_POINTS: usize = 1024;

/// Number of radii in the dilatation probe grid.
pub const K_PROBE_RADII: usize = 32;

/// Inner radius of the dilatation probe grid.
pub const K_PROBE_INNER: f64 = 0.1;

/// `f(z) = Σ aₙ zⁿ + Σ conj(bₙ) conj(z)ⁿ`, truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesHarmonicMap<T: Real> {
    analytic: Vec<Complex<T>>,
    /// `antianalytic[n] = bₙ`; index 0 is always zero.
    antianalytic: Vec<Complex<T>>,
}

impl<T: Real> SeriesHarmonicMap<T> {
    /// `analytic` holds `a₀, a₁, …`; `antianalytic` holds `b₁, b₂, …`.
    pub fn new(analytic: Vec<Complex<T>>, antianalytic: Vec<Complex<T>>) -> Self {
        let mut a = analytic;
        if a.is_empty() {
            a.push(Complex::new(T::zero(), T::zero()));
        }
        let mut b = Vec::with_capacity(antianalytic.len() + 1);
        b.push(Complex::new(T::zero(), T::zero()));
        b.extend(antianalytic);
        Self {
            analytic: a,
            antianalytic: b,
        }
    }

    pub fn identity() -> Self {
        Self::new(
            vec![
                Complex::new(T::zero(), T::zero()),
                Complex::new(T::one(), T::zero()),
            ],
            vec![],
        )
    }

    /// `aₙ` for `n ≥ 0`, zero beyond the truncation.
    pub fn a(&self, n: usize) -> Complex<T> {
        self.analytic
            .get(n)
            .copied()
            .unwrap_or_else(Complex::default)
    }

    /// `bₙ` for `n ≥ 1` (and `b₀ = 0`), zero beyond the truncation.
    pub fn b(&self, n: usize) -> Complex<T> {
        self.antianalytic
            .get(n)
            .copied()
            .unwrap_or_else(Complex::default)
    }

    pub fn analytic_coeffs(&self) -> &[Complex<T>] {
        &self.analytic
    }

    /// `b₁, b₂, …`
    pub fn antianalytic_coeffs(&self) -> &[Complex<T>] {
        &self.antianalytic[1..]
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        (self.analytic.len() - 1).max(self.antianalytic.len() - 1)
    }

    fn map_coeffs(&self, f: impl Fn(usize, Complex<T>) -> Complex<T>) -> Self {
        Self {
            analytic: self
                .analytic
                .iter()
                .enumerate()
                .map(|(n, c)| f(n, *c))
                .collect(),
            antianalytic: self
                .antianalytic
                .iter()
                .enumerate()
                .map(|(n, c)| f(n, *c))
                .collect(),
        }
    }

    fn horner(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
        coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * z + c)
    }

    fn horner_derivative(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
        coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (n, c)| {
                acc * z + c * from_usize::<T>(n)
            })
    }

    fn value(&self, z: Complex<T>) -> Complex<T> {
        Self::horner(&self.analytic, z) + Self::horner(&self.antianalytic, z).conj()
    }

    fn derivatives(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        (
            Self::horner_derivative(&self.analytic, z),
            Self::horner_derivative(&self.antianalytic, z).conj(),
        )
    }
}

/// `f(z) = c0 + a·z + b·conj(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineHarmonicMap<T: Real> {
    pub c0: Complex<T>,
    pub a: Complex<T>,
    pub b: Complex<T>,
}

impl<T: Real> AffineHarmonicMap<T> {
    pub fn new(c0: Complex<T>, a: Complex<T>, b: Complex<T>) -> Self {
        Self { c0, a, b }
    }

    pub fn is_sense_preserving(&self) -> bool {
        self.b.norm() < self.a.norm()
    }
}

/// Boundary phase `φ` of a Poisson integral map: continuous, nondecreasing,
/// with `φ(2π) − φ(0) = 2π`.
#[derive(Clone)]
pub enum BoundaryPhase<T: Real> {
    /// `φ(t) = t`
    Linear,
    /// `φ(t) = t + ε·sin t`, monotone for `|ε| < 1`.
    Sine {
        eps: T,
    },
    Custom(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> fmt::Debug for BoundaryPhase<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPhase::Linear => write!(f, "Linear"),
            BoundaryPhase::Sine { eps } => write!(f, "Sine {{ eps: {eps} }}"),
            BoundaryPhase::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl<T: Real> BoundaryPhase<T> {
    pub fn at(&self, t: T) -> T {
        match self {
            BoundaryPhase::Linear => t,
            BoundaryPhase::Sine { eps } => t + *eps * t.sin(),
            BoundaryPhase::Custom(phi) => phi(t),
        }
    }

    /// `φ'(t)`; central difference for custom phases.
    pub fn derivative(&self, t: T) -> T {
        match self {
            BoundaryPhase::Linear => T::one(),
            BoundaryPhase::Sine { eps } => T::one() + *eps * t.cos(),
            BoundaryPhase::Custom(phi) => {
                let h = lit::<T>(1e-6);
                (phi(t + h) - phi(t - h)) / (h + h)
            }
        }
    }
}

/// Settings for the adaptive Simpson rule behind Poisson integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuadrature<T> {
    pub abs_tol: T,
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl<T: Real> Default for KernelQuadrature<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit(1e-10),
            max_panels: 1 << 16,
            initial_panels: 16,
        }
    }
}

/// `f(z) = (M/2π) ∫₀^{2π} (1−|z|²)/|e^{it}−z|² · e^{iφ(t)} dt`.
///
/// `coefficient` is `M` at construction; post-composition by a rotation or a
/// positive scale multiplies it.
#[derive(Debug, Clone)]
pub struct PoissonHarmonicMap<T: Real> {
    coefficient: Complex<T>,
    phase: BoundaryPhase<T>,
    quadrature: KernelQuadrature<T>,
}

impl<T: Real> PoissonHarmonicMap<T> {
    pub fn new(scale: T, phase: BoundaryPhase<T>) -> Result<Self> {
        Self::with_quadrature(scale, phase, KernelQuadrature::default())
    }

    pub fn with_quadrature(
        scale: T,
        phase: BoundaryPhase<T>,
        quadrature: KernelQuadrature<T>,
    ) -> Result<Self> {
        if !(scale > T::zero()) || !scale.is_finite() {
            return Err(Error::param(
                "scale",
                format!("must be positive, got {scale}"),
            ));
        }
        check_phase(&phase)?;
        Ok(Self {
            coefficient: Complex::new(scale, T::zero()),
            phase,
            quadrature,
        })
    }

    pub fn scale(&self) -> T {
        self.coefficient.norm()
    }

    pub fn phase(&self) -> &BoundaryPhase<T> {
        &self.phase
    }

    fn guard(&self, z: Complex<T>) -> Result<()> {
        let limit = lit::<T>(POISSON_MAX_RADIUS);
        if z.norm() > limit {
            return Err(outside(z, limit));
        }
        Ok(())
    }

    // The boundary data at t₀ = arg z is subtracted from the integrand and
    // added back in closed form, which removes the kernel peak at e^{it₀}.
    // Integration runs over [t₀ − π, t₀ + π] so the peak sits mid-interval.
    fn value(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.guard(z)?;
        let two_pi = T::PI() + T::PI();
        let weight = one_minus_sq(z);
        let q = &self.quadrature;
        let tol = q.abs_tol * two_pi / self.coefficient.norm();
        let t0 = z.im.atan2(z.re);
        let anchor = cis(self.phase.at(t0));
        let est = simpson_adaptive(
            |t: T| {
                let w = cis(t);
                Ok((cis(self.phase.at(t)) - anchor) * (weight / (w - z).norm_sqr()))
            },
            t0 - T::PI(),
            t0 + T::PI(),
            tol,
            q.max_panels,
            q.initial_panels,
            "Poisson integral",
        )?;
        Ok((est.value / two_pi + anchor) * self.coefficient)
    }

    // Integrating ∂_z P = e^{it}/(e^{it}−z)² by parts gives
    //   f_z = (M/2π) ∫ ψ(t)/(e^{it}−z) dt,  f_z̄ = −(M/2π) ∫ ψ(t)/(e^{−it}−z̄) dt
    // with ψ = φ′e^{iφ}. Since (1/2π)∫ e^{it}/(e^{it}−z) dt = 1, subtracting
    // ψ(t₀)e^{±i(t−t₀)} leaves a bounded integrand.
    fn derivatives(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        self.guard(z)?;
        let two_pi = T::PI() + T::PI();
        let q = &self.quadrature;
        let tol = q.abs_tol * two_pi / self.coefficient.norm();
        let t0 = z.im.atan2(z.re);
        let psi = |t: T| cis(self.phase.at(t)) * self.phase.derivative(t);
        let psi0 = psi(t0);
        let est = simpson_adaptive(
            |t: T| {
                let w = cis(t);
                let shift = cis(t - t0);
                let p = psi(t);
                Ok([
                    (p - psi0 * shift) / (w - z),
                    (p - psi0 * shift.conj()) / (w.conj() - z.conj()),
                ])
            },
            t0 - T::PI(),
            t0 + T::PI(),
            tol,
            q.max_panels,
            q.initial_panels,
            "differentiated Poisson integral",
        )?;
        let fz = (est.value[0] / two_pi + psi0 * cis(-t0)) * self.coefficient;
        let fzb = -(est.value[1] / two_pi + psi0 * cis(t0)) * self.coefficient;
        Ok((fz, fzb))
    }

    /// Boundary value and its `t`-derivative at `e^{it}`.
    fn trace(&self, t: T) -> (Complex<T>, Complex<T>) {
        let value = self.coefficient * cis(self.phase.at(t));
        let tangent = value * Complex::new(T::zero(), self.phase.derivative(t));
        (value, tangent)
    }
}

fn check_phase<T: Real>(phase: &BoundaryPhase<T>) -> Result<()> {
    let two_pi = T::PI() + T::PI();
    let span = phase.at(two_pi) - phase.at(T::zero());
    if (span - two_pi).abs() > lit(1e-9) {
        return Err(Error::param(
            "phase",
            format!("φ(2π) − φ(0) = {span}, expected 2π"),
        ));
    }
    let mut prev = phase.at(T::zero());
    for k in 1..=PHASE_CHECK_POINTS {
        let t = two_pi * from_usize(k) / from_usize(PHASE_CHECK_POINTS);
        let cur = phase.at(t);
        if !cur.is_finite() || cur < prev - lit(1e-12) {
            return Err(Error::param(
                "phase",
                format!("not nondecreasing near t = {t}"),
            ));
        }
        prev = cur;
    }
    Ok(())
}

/// Tagged harmonic map.
#[derive(Debug, Clone)]
pub enum HarmonicMap<T: Real> {
    Series(SeriesHarmonicMap<T>),
    Poisson(PoissonHarmonicMap<T>),
    Affine(AffineHarmonicMap<T>),
    /// `z ↦ inner(factor · z)` with `0 < |factor| ≤ 1`.
    Precomposed {
        inner: Box<HarmonicMap<T>>,
        factor: Complex<T>,
    },
}

/// `(f_z, f_z̄)` with the derived stretch quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeFrame<T: Real> {
    pub fz: Complex<T>,
    pub fzb: Complex<T>,
    /// `‖D_f‖ = |f_z| + |f_z̄|`
    pub op_norm: T,
    /// `λ(D_f) = ||f_z| − |f_z̄||`
    pub lambda: T,
    /// `J_f = |f_z|² − |f_z̄|²`
    pub jacobian: T,
}

impl<T: Real> DerivativeFrame<T> {
    pub fn new(fz: Complex<T>, fzb: Complex<T>) -> Self {
        let (p, q) = (fz.norm(), fzb.norm());
        Self {
            fz,
            fzb,
            op_norm: p + q,
            lambda: (p - q).abs(),
            jacobian: (p - q) * (p + q),
        }
    }

    /// Second complex dilatation modulus `|f_z̄ / f_z|`.
    pub fn dilatation(&self) -> T {
        self.fzb.norm() / self.fz.norm()
    }

    pub fn is_sense_preserving(&self) -> bool {
        self.jacobian > T::zero()
    }

    /// `|∂_ρ f(ρe^{iθ})| = |f_z + e^{−2iθ} f_z̄|`.
    pub fn radial_stretch(&self, theta: T) -> T {
        (self.fz + cis(-(theta + theta)) * self.fzb).norm()
    }

    /// `∂_t f(re^{it}) = i z f_z − i z̄ f_z̄` at `z = re^{it}`.
    pub fn tangent(&self, z: Complex<T>) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        i * (z * self.fz - z.conj() * self.fzb)
    }
}

/// Empirical dilatation over a polar probe grid.
///
/// `k_lower` is a supremum over finitely many probes and therefore a lower
/// bound for the true quasiconformality constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilatationReport<T> {
    pub omega_sup: T,
    pub k_lower: T,
    pub r_max: T,
    pub grid_density: usize,
    pub radii: usize,
    pub probes: usize,
    /// Location of the largest dilatation found.
    pub argmax: Complex<T>,
}

fn one_minus_sq<T: Real>(z: Complex<T>) -> T {
    (T::one() - z.norm()) * (T::one() + z.norm())
}

fn outside<T: Real>(z: Complex<T>, limit: T) -> Error {
    Error::PointOutsideDisk {
        re: to_f64(z.re),
        im: to_f64(z.im),
        modulus: to_f64(z.norm()),
        limit: to_f64(limit),
    }
}

impl<T: Real> From<SeriesHarmonicMap<T>> for HarmonicMap<T> {
    fn from(m: SeriesHarmonicMap<T>) -> Self {
        HarmonicMap::Series(m)
    }
}
impl<T: Real> From<AffineHarmonicMap<T>> for HarmonicMap<T> {
    fn from(m: AffineHarmonicMap<T>) -> Self {
        HarmonicMap::Affine(m)
    }
}
impl<T: Real> From<PoissonHarmonicMap<T>> for HarmonicMap<T> {
    fn from(m: PoissonHarmonicMap<T>) -> Self {
        HarmonicMap::Poisson(m)
    }
}

impl<T: Real> HarmonicMap<T> {
    pub fn identity() -> Self {
        SeriesHarmonicMap::identity().into()
    }

    /// `f(z) = M z`
    pub fn scaled_identity(m: T) -> Self {
        SeriesHarmonicMap::new(vec![Complex::default(), Complex::new(m, T::zero())], vec![]).into()
    }

    pub fn affine(a: Complex<T>, b: Complex<T>) -> Self {
        AffineHarmonicMap::new(Complex::default(), a, b).into()
    }

    /// `f(z) = z + c·conj(z)ⁿ`
    pub fn polynomial(c: T, n: usize) -> Self {
        let mut b = vec![Complex::default(); n.max(1)];
        b[n.max(1) - 1] = Complex::new(c, T::zero());
        SeriesHarmonicMap::new(
            vec![Complex::default(), Complex::new(T::one(), T::zero())],
            b,
        )
        .into()
    }

    /// Radius beyond which interior evaluation is refused; `1` means the
    /// whole open disk.
    pub fn interior_limit(&self) -> T {
        match self {
            HarmonicMap::Series(_) | HarmonicMap::Affine(_) => T::one(),
            HarmonicMap::Poisson(_) => lit(POISSON_MAX_RADIUS),
            HarmonicMap::Precomposed { inner, factor } => {
                (inner.interior_limit() / factor.norm()).min(T::one())
            }
        }
    }

    /// Largest radius at which derivative data is available for ring
    /// integrals: `min(r, interior_limit)`.
    pub fn clamp_radius(&self, r: T) -> T {
        let lim = self.interior_limit();
        if lim < T::one() {
            r.min(lim)
        } else {
            r
        }
    }

    fn check_disk(&self, z: Complex<T>) -> Result<()> {
        if !(z.norm() < T::one()) {
            return Err(outside(z, T::one()));
        }
        Ok(())
    }

    /// Absolute accuracy of a single value or derivative sample: rounding
    /// level for closed-form maps, the kernel tolerance for Poisson maps.
    pub fn sample_accuracy(&self) -> T {
        match self {
            HarmonicMap::Poisson(p) => p.quadrature.abs_tol,
            HarmonicMap::Precomposed { inner, .. } => inner.sample_accuracy(),
            _ => T::epsilon(),
        }
    }

    /// `f(z)` for `|z| < 1`.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_disk(z)?;
        match self {
            HarmonicMap::Series(s) => Ok(s.value(z)),
            HarmonicMap::Affine(m) => Ok(m.c0 + m.a * z + m.b * z.conj()),
            HarmonicMap::Poisson(p) => p.value(z),
            HarmonicMap::Precomposed { inner, factor } => inner.evaluate(*factor * z),
        }
    }

    /// Wirtinger derivatives and stretch data at `z`.
    pub fn wirtinger(&self, z: Complex<T>) -> Result<DerivativeFrame<T>> {
        self.check_disk(z)?;
        let (fz, fzb) = self.raw_derivatives(z)?;
        Ok(DerivativeFrame::new(fz, fzb))
    }

    fn raw_derivatives(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        match self {
            HarmonicMap::Series(s) => Ok(s.derivatives(z)),
            HarmonicMap::Affine(m) => Ok((m.a, m.b)),
            HarmonicMap::Poisson(p) => p.derivatives(z),
            HarmonicMap::Precomposed { inner, factor } => {
                let (fz, fzb) = inner.raw_derivatives(*factor * z)?;
                Ok((fz * factor, fzb * factor.conj()))
            }
        }
    }

    /// Value and `t`-derivative of `t ↦ f(r e^{it})`.
    ///
    /// Inside the interior limit this is exact interior evaluation; beyond it
    /// (Poisson maps near the circle) the boundary trace is returned.
    pub fn ring_sample(&self, r: T, t: T) -> Result<(Complex<T>, Complex<T>)> {
        match self {
            HarmonicMap::Poisson(p) if r > lit(POISSON_MAX_RADIUS) => Ok(p.trace(t)),
            HarmonicMap::Precomposed { inner, factor }
                if r * factor.norm() >= inner.interior_limit() =>
            {
                let (v, d) = inner.ring_sample(r * factor.norm(), t + factor.arg())?;
                Ok((v, d))
            }
            _ => {
                let z = cis(t) * r;
                let value = self.evaluate(z)?;
                let frame = self.wirtinger(z)?;
                Ok((value, frame.tangent(z)))
            }
        }
    }

    /// `t ↦ |∂_t f(re^{it})|`, with the same boundary fallback as
    /// [`ring_sample`](Self::ring_sample) but without evaluating `f` itself
    /// when interior data is available.
    pub fn ring_speed(&self, r: T, t: T) -> Result<T> {
        if r <= self.interior_limit() && r < T::one() {
            let z = cis(t) * r;
            return Ok(self.wirtinger(z)?.tangent(z).norm());
        }
        Ok(self.ring_sample(r, t)?.1.norm())
    }

    /// `F(ζ) = f(r0 ζ)`.
    pub fn rescale(&self, r0: T) -> Result<Self> {
        if !(r0 > T::zero() && r0 < T::one()) {
            return Err(Error::param("r0", format!("must lie in (0, 1), got {r0}")));
        }
        Ok(self.precompose(Complex::new(r0, T::zero())))
    }

    /// `z ↦ f(e^{iα} z)`.
    pub fn rotate_argument(&self, alpha: T) -> Self {
        self.precompose(cis(alpha))
    }

    fn precompose(&self, c: Complex<T>) -> Self {
        match self {
            HarmonicMap::Series(s) => {
                let mut powers = Vec::with_capacity(s.degree() + 1);
                let mut p = Complex::new(T::one(), T::zero());
                for _ in 0..=s.degree() {
                    powers.push(p);
                    p *= c;
                }
                // conj(bₙ)·conj(cz)ⁿ = conj(bₙ cⁿ)·conj(z)ⁿ
                HarmonicMap::Series(s.map_coeffs(|n, coef| coef * powers[n]))
            }
            HarmonicMap::Affine(m) => {
                HarmonicMap::Affine(AffineHarmonicMap::new(m.c0, m.a * c, m.b * c.conj()))
            }
            HarmonicMap::Precomposed { inner, factor } => HarmonicMap::Precomposed {
                inner: inner.clone(),
                factor: *factor * c,
            },
            HarmonicMap::Poisson(_) => HarmonicMap::Precomposed {
                inner: Box::new(self.clone()),
                factor: c,
            },
        }
    }

    /// `z ↦ c·f(z)` for complex `c ≠ 0`.
    pub fn post_multiply(&self, c: Complex<T>) -> Self {
        match self {
            HarmonicMap::Series(s) => {
                // c·conj(bₙ) = conj(conj(c)·bₙ)
                let a = s.analytic.iter().map(|x| *x * c).collect();
                let b = s.antianalytic[1..].iter().map(|x| *x * c.conj()).collect();
                HarmonicMap::Series(SeriesHarmonicMap::new(a, b))
            }
            HarmonicMap::Affine(m) => {
                HarmonicMap::Affine(AffineHarmonicMap::new(m.c0 * c, m.a * c, m.b * c))
            }
            HarmonicMap::Poisson(p) => {
                let mut q = p.clone();
                q.coefficient *= c;
                HarmonicMap::Poisson(q)
            }
            HarmonicMap::Precomposed { inner, factor } => HarmonicMap::Precomposed {
                inner: Box::new(inner.post_multiply(c)),
                factor: *factor,
            },
        }
    }

    /// `z ↦ c·f(z)` for real `c > 0`.
    pub fn scale(&self, c: T) -> Self {
        self.post_multiply(Complex::new(c, T::zero()))
    }

    /// Supremum of the dilatation `|f_z̄/f_z|` over a polar grid of
    /// [`K_PROBE_RADII`] geometrically spaced radii in `(0.1, r_max]` and
    /// `angles` equally spaced angles, refined by golden-section search in
    /// angle (on the best ring) and in radius (between neighbouring rings).
    pub fn estimate_k(&self, r_max: T, angles: usize) -> Result<DilatationReport<T>> {
        if !(r_max > T::zero() && r_max < T::one()) {
            return Err(Error::param(
                "r_max",
                format!("must lie in (0, 1), got {r_max}"),
            ));
        }
        let angles = angles.max(1);
        let radii = probe_radii(r_max);
        let two_pi = T::PI() + T::PI();
        let cells: Vec<(usize, usize)> = (0..radii.len())
            .flat_map(|i| (0..angles).map(move |j| (i, j)))
            .collect();
        let frames: Vec<Result<(Complex<T>, DerivativeFrame<T>)>> = cells
            .par_iter()
            .map(|&(i, j)| {
                let z = cis(two_pi * from_usize(j) / from_usize(angles)) * radii[i];
                self.wirtinger(z).map(|fr| (z, fr))
            })
            .collect();
        let mut best = (T::neg_infinity(), 0usize, Complex::default());
        for (idx, fr) in frames.into_iter().enumerate() {
            let (z, frame) = fr?;
            if !frame.is_sense_preserving() {
                return Err(Error::NotSensePreserving {
                    re: to_f64(z.re),
                    im: to_f64(z.im),
                    jacobian: to_f64(frame.jacobian),
                });
            }
            let w = frame.dilatation();
            if w > best.0 {
                best = (w, idx, z);
            }
        }
        let (mut omega, idx, mut argmax) = best;
        let (ri, aj) = cells[idx];
        let h = two_pi / from_usize(angles);
        let theta0 = two_pi * from_usize(aj) / from_usize(angles);
        let r_best = radii[ri];
        let dil = |z: Complex<T>| -> Result<T> {
            let fr = self.wirtinger(z)?;
            if !fr.is_sense_preserving() {
                return Err(Error::NotSensePreserving {
                    re: to_f64(z.re),
                    im: to_f64(z.im),
                    jacobian: to_f64(fr.jacobian),
                });
            }
            Ok(fr.dilatation())
        };
        let tol = lit::<T>(1e-12);
        let (th, w) =
            golden_section_max(|t| dil(cis(t) * r_best), theta0 - h, theta0 + h, tol, 200)?;
        let mut theta_best = theta0;
        if w > omega {
            omega = w;
            theta_best = th;
            argmax = cis(th) * r_best;
        }
        let r_lo = if ri == 0 {
            lit(K_PROBE_INNER)
        } else {
            radii[ri - 1]
        };
        let r_hi = radii[(ri + 1).min(radii.len() - 1)];
        if r_hi > r_lo {
            let (rr, w) = golden_section_max(
                |r| dil(cis(theta_best) * r),
                r_lo.min(r_best),
                r_hi,
                tol,
                200,
            )?;
            if w > omega {
                omega = w;
                argmax = cis(theta_best) * rr;
            }
        }
        Ok(DilatationReport {
            omega_sup: omega,
            k_lower: (T::one() + omega) / (T::one() - omega),
            r_max,
            grid_density: angles,
            radii: radii.len(),
            probes: cells.len(),
            argmax,
        })
    }

    /// `sup_{|z| = r} |f(z)|`: grid over `angles` points with golden-section
    /// refinement. Since `|f|` is subharmonic this is also the supremum over
    /// `|z| ≤ r`.
    pub fn sup_modulus(&self, r: T, angles: usize) -> Result<T> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::param(
                "r_max",
                format!("must lie in (0, 1), got {r}"),
            ));
        }
        let two_pi = T::PI() + T::PI();
        let (_, v) = crate::quadrature::grid_refined_max(
            |t| Ok(self.ring_sample(r, t)?.0.norm()),
            T::zero(),
            two_pi,
            angles,
            true,
        )?;
        Ok(v)
    }
}

/// Radii of the dilatation probe grid.
pub fn probe_radii<T: Real>(r_max: T) -> Vec<T> {
    let inner = lit::<T>(K_PROBE_INNER);
    let n = K_PROBE_RADII;
    if r_max <= inner {
        return (1..=n)
            .map(|k| r_max * from_usize(k) / from_usize(n))
            .collect();
    }
    let ratio = r_max / inner;
    (1..=n)
        .map(|k| {
            if k == n {
                r_max
            } else {
                inner * ratio.powf(from_usize::<T>(k) / from_usize(n))
            }
        })
        .collect()
}
