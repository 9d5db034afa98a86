//! Length, area, Hardy-mean and boundary-distance functionals.

mod arcs;
mod curve;
mod functionals;

pub use arcs::ArcSet;
pub use curve::{
    convex_hull, hull_diameter, point_segment_distance, point_set_diameter, segment_length_in_disk,
    segments_intersect, PolygonalCurve,
};
pub use functionals::*;

use crate::error::{Error, Result};
use crate::quadrature::Tolerance;
use crate::scalar::{lit, Real};

/// Numerical settings shared by every functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Grid size for suprema over an angle.
    pub theta_grid: usize,
    /// Proxy radius `r_b < 1` standing in for the unit circle.
    pub boundary_radius: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit(1e-9),
            rel_tol: lit(1e-8),
            max_subdivisions: 1 << 16,
            theta_grid: 720,
            boundary_radius: lit(1.0 - 1e-6),
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) {
            return Err(Error::param(
                "abs_tol",
                format!("must be positive, got {}", self.abs_tol),
            ));
        }
        if !(self.rel_tol > T::zero()) {
            return Err(Error::param(
                "rel_tol",
                format!("must be positive, got {}", self.rel_tol),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::param("max_subdivisions", "must be positive"));
        }
        if self.theta_grid < 2 {
            return Err(Error::param(
                "theta_grid",
                format!("must be at least 2, got {}", self.theta_grid),
            ));
        }
        if !(self.boundary_radius > T::zero() && self.boundary_radius < T::one()) {
            return Err(Error::param(
                "boundary_radius",
                format!("must lie in (0, 1), got {}", self.boundary_radius),
            ));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance<T> {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
        }
    }
}
