//! Length, area and distortion functionals of harmonic quasiconformal maps
//! of the unit disk, with a harness that evaluates both sides of the
//! classical length–area inequalities for a given map.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod mapspec;
pub mod quadrature;
pub mod scalar;
pub mod theorems;

pub use error::{Error, Result};
pub use harmonic::HarmonicMap;
pub use mapspec::MapSpec;

pub type HarmonicMap64 = harmonic::HarmonicMap<f64>;
pub type HarmonicMap32 = harmonic::HarmonicMap<f32>;
pub type PolygonalCurve64 = geometry::PolygonalCurve<f64>;
pub type QuadratureConfig64 = geometry::QuadratureConfig<f64>;
pub type HarnessConfig64 = theorems::HarnessConfig<f64>;
