//! Verification harness: both sides of each inequality, evaluated on a
//! declared map and reported with an oriented margin.

mod boundary;
mod interior;
mod report;

pub use boundary::{
    isoperimetric_check, thm1_bound, thm1_rhs, thm2_bound, thm3_carleson, thm3_hypothesis_fit,
    thm3_linear_connectivity, Thm2Options,
};
pub use interior::{
    check_prop1, prop2_bound, schwarz_radial_check, selfmap_distortion_check, thm4_ratio,
    thm5_bound,
};
pub use report::{fmt_float, report_tolerance, write_reports_csv, InequalityReport, Orientation};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::QuadratureConfig;
use crate::harmonic::{DilatationReport, HarmonicMap};
use crate::quadrature::{gauss_kronrod, grid_refined_max};
use crate::scalar::{cis, lit, to_f64, Real};

/// Settings shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessConfig<T> {
    pub quad: QuadratureConfig<T>,
    /// Outer radius of the dilatation probe grid.
    pub k_radius: T,
    pub k_angles: usize,
    /// Vertices of the polygonal image of the proxy circle.
    pub boundary_samples: usize,
    /// Nodes per axis of the fixed-rule cross-checks (the check also runs
    /// at twice this count).
    pub fixed_nodes: usize,
    /// Angle grid for two-parameter sweeps (θ × r).
    pub sweep_theta_grid: usize,
    pub seed: u64,
}

impl<T: Real> Default for HarnessConfig<T> {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::default(),
            k_radius: lit(0.99),
            k_angles: 256,
            boundary_samples: 1024,
            fixed_nodes: 128,
            sweep_theta_grid: 180,
            seed: 0,
        }
    }
}

/// The dilatation used by a check: the declared value, or the empirical
/// lower bound when none is declared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedK<T: Real> {
    pub k: T,
    pub estimate: DilatationReport<T>,
}

/// Declared values below the empirical lower bound are refused, since they
/// would falsify the hypotheses of every check.
pub fn resolve_k<T: Real>(
    map: &HarmonicMap<T>,
    declared: Option<T>,
    cfg: &HarnessConfig<T>,
) -> Result<ResolvedK<T>> {
    let r = cfg.k_radius.min(map.interior_limit() * lit(0.99));
    let estimate = map.estimate_k(r, cfg.k_angles)?;
    let k = match declared {
        None => estimate.k_lower,
        Some(k) => {
            if !(k >= T::one()) {
                return Err(Error::param("K", format!("must be at least 1, got {k}")));
            }
            if k < estimate.k_lower * (T::one() - lit(1e-12)) {
                return Err(Error::KBelowLowerBound {
                    declared: to_f64(k),
                    lower: to_f64(estimate.k_lower),
                });
            }
            k.max(estimate.k_lower)
        }
    };
    Ok(ResolvedK { k, estimate })
}

/// `sup |f|` over the disk, read off the proxy circle (`|f|` is
/// subharmonic).
pub fn sup_modulus<T: Real>(map: &HarmonicMap<T>, cfg: &HarnessConfig<T>) -> Result<T> {
    let rb = cfg.quad.boundary_radius;
    let (_, v) = grid_refined_max(
        |t| Ok(map.ring_sample(rb, t)?.0.norm()),
        T::zero(),
        T::PI() + T::PI(),
        cfg.quad.theta_grid,
        true,
    )?;
    Ok(v)
}

/// `∫₀^{r_k} g(ρe^{iθ}) dρ` for every radius of an increasing list.
pub(crate) fn radial_profile<T: Real, G>(
    g: G,
    theta: T,
    radii: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<T>>
where
    G: Fn(Complex<T>) -> Result<T>,
{
    let dir = cis(theta);
    let mut out = Vec::with_capacity(radii.len());
    let mut acc = T::zero();
    let mut prev = T::zero();
    for &r in radii {
        acc += gauss_kronrod(
            |rho| g(dir * rho),
            prev,
            r,
            cfg.tolerance(),
            cfg.max_subdivisions,
            1,
            "radial profile",
        )?
        .value;
        out.push(acc);
        prev = r;
    }
    Ok(out)
}

pub(crate) fn check_increasing<T: Real>(name: &'static str, radii: &[T], upper: T) -> Result<()> {
    let mut prev = T::zero();
    for &r in radii {
        if !(r > prev && r <= upper) {
            return Err(Error::param(
                name,
                format!("radii must increase within (0, {upper}], got {r}"),
            ));
        }
        prev = r;
    }
    Ok(())
}
