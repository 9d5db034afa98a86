//! Empirical geometric constants of polygonal Jordan curves.
//!
//! Every constant is a maximum over a finite probe set and is therefore a
//! lower bound for the true constant of the curve.

mod arcs;
mod connectivity;
mod regularity;

pub use arcs::{lavrentiev_constant, pair_probes, quasicircle_constant, shorter_arc, PairProbes};
pub use connectivity::{linear_connectivity_constant, ConnectivityConfig, Raster};
pub use regularity::{ahlfors_constant, ahlfors_probes, ahlfors_ratio, AhlforsProbes};

use serde::Serialize;

use crate::error::Result;
use crate::geometry::PolygonalCurve;
use crate::scalar::{lit, Real};

/// Vertex counts up to which every vertex pair is probed.
pub const EXHAUSTIVE_LIMIT: usize = 1024;

/// Chords shorter than this are skipped as degenerate pairs.
pub const DEGENERATE_CHORD: f64 = 1e-12;

/// Largest ratio seen over a probe set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantEstimate<T> {
    pub value: T,
    /// Probes evaluated (degenerate pairs excluded).
    pub probes: usize,
    /// Pairs skipped because their chord was below [`DEGENERATE_CHORD`].
    pub degenerate: usize,
    pub exhaustive: bool,
}

impl<T: Real> ConstantEstimate<T> {
    pub fn diverged(&self) -> bool {
        !self.value.is_finite()
    }
}

/// Settings for [`curve_constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsConfig {
    pub pairs: usize,
    pub centers: usize,
    pub radii: usize,
    pub connectivity: ConnectivityConfig,
    pub seed: u64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            pairs: 20_000,
            centers: 128,
            radii: 48,
            connectivity: ConnectivityConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveConstantsReport<T> {
    pub vertices: usize,
    pub lavrentiev: ConstantEstimate<T>,
    pub quasicircle: ConstantEstimate<T>,
    pub ahlfors: ConstantEstimate<T>,
    pub linear_connectivity: ConstantEstimate<T>,
    /// `quasicircle ≤ lavrentiev + 1e-9` (the diameter of an arc never
    /// exceeds its length).
    pub arc_bounds_consistent: bool,
    /// A finite Lavrentiev constant coincides with finite Ahlfors and
    /// quasicircle constants.
    pub finiteness_consistent: bool,
}

pub fn curve_constants<T: Real>(
    curve: &PolygonalCurve<T>,
    cfg: &ConstantsConfig,
) -> Result<CurveConstantsReport<T>> {
    let lavrentiev = lavrentiev_constant(curve, cfg.pairs, cfg.seed)?;
    let quasicircle = quasicircle_constant(curve, cfg.pairs, cfg.seed)?;
    let ahlfors = ahlfors_constant(curve, cfg.centers, cfg.radii, cfg.seed)?;
    let linear_connectivity = linear_connectivity_constant(curve, &cfg.connectivity, cfg.seed)?;
    let lav_finite = !lavrentiev.diverged();
    Ok(CurveConstantsReport {
        vertices: curve.len(),
        arc_bounds_consistent: quasicircle.value <= lavrentiev.value + lit(1e-9),
        finiteness_consistent: lav_finite == (!ahlfors.diverged() && !quasicircle.diverged()),
        lavrentiev,
        quasicircle,
        ahlfors,
        linear_connectivity,
    })
}
