use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ConstantEstimate;
use crate::error::{Error, Result};
use crate::geometry::PolygonalCurve;
use crate::scalar::{from_usize, lit, Real};

/// Disk centres and, per centre, the radii probed by [`ahlfors_constant`].
#[derive(Debug, Clone, PartialEq)]
pub struct AhlforsProbes<T> {
    pub centers: Vec<Complex<T>>,
    pub radii: Vec<Vec<T>>,
}

impl<T> AhlforsProbes<T> {
    pub fn count(&self) -> usize {
        self.radii.iter().map(Vec::len).sum()
    }
}

/// Half the centres are evenly strided vertices, the rest are seeded points
/// of the bounding box, plus the vertex centroid. Each centre gets
/// `radii` geometric radii from `10⁻³·diam` to `diam`, plus the smallest
/// radius enclosing the whole curve (inflated by `1e-9`).
pub fn ahlfors_probes<T: Real>(
    curve: &PolygonalCurve<T>,
    centers: usize,
    radii: usize,
    seed: u64,
) -> AhlforsProbes<T> {
    let v = curve.vertices();
    let n = v.len();
    let on_curve = (centers / 2).clamp(1, n);
    let mut pts: Vec<Complex<T>> = (0..on_curve).map(|k| v[k * n / on_curve]).collect();

    let (mut lo, mut hi) = (v[0], v[0]);
    for p in v {
        lo = Complex::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in on_curve..centers {
        let (u, w): (f64, f64) = (rng.gen(), rng.gen());
        pts.push(Complex::new(
            lo.re + (hi.re - lo.re) * lit(u),
            lo.im + (hi.im - lo.im) * lit(w),
        ));
    }
    let centroid = v
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + p)
        / from_usize::<T>(n);
    pts.push(centroid);

    let diam = curve.diameter();
    let radii_count = radii.max(1);
    let ladder: Vec<T> = (0..radii_count)
        .map(|k| {
            let e = if radii_count == 1 {
                0.0
            } else {
                -3.0 + 3.0 * k as f64 / (radii_count - 1) as f64
            };
            diam * lit(10f64.powf(e))
        })
        .collect();
    let radii = pts
        .iter()
        .map(|w| {
            let enclosing = v.iter().map(|p| (p - w).norm()).fold(T::zero(), T::max);
            let mut rs = ladder.clone();
            rs.push(enclosing * lit(1.0 + 1e-9));
            rs
        })
        .collect();
    AhlforsProbes {
        centers: pts,
        radii,
    }
}

/// `ℓ(curve ∩ D(w, r)) / r`.
pub fn ahlfors_ratio<T: Real>(curve: &PolygonalCurve<T>, w: Complex<T>, r: T) -> T {
    curve.length_inside_disk(w, r) / r
}

/// `max ℓ(curve ∩ D(w, r))/r` over [`ahlfors_probes`].
pub fn ahlfors_constant<T: Real>(
    curve: &PolygonalCurve<T>,
    centers: usize,
    radii: usize,
    seed: u64,
) -> Result<ConstantEstimate<T>> {
    if curve.length() <= T::zero() {
        return Err(Error::InvalidCurve("curve has zero length".into()));
    }
    let probes = ahlfors_probes(curve, centers, radii, seed);
    let best: Vec<T> = probes
        .centers
        .par_iter()
        .zip(&probes.radii)
        .map(|(w, rs)| {
            rs.iter()
                .map(|r| ahlfors_ratio(curve, *w, *r))
                .fold(T::zero(), T::max)
        })
        .collect();
    Ok(ConstantEstimate {
        value: best.into_iter().fold(T::zero(), T::max),
        probes: probes.count(),
        degenerate: 0,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn circle_is_two_pi() {
        let circle = PolygonalCurve::regular(4096, Complex64::new(0.0, 0.0), 1.0).unwrap();
        let a = ahlfors_constant(&circle, 64, 32, 1).unwrap();
        assert!((a.value - 2.0 * PI).abs() < 2e-2, "{}", a.value);
    }

    #[test]
    fn segment_from_midpoint() {
        let seg =
            PolygonalCurve::open(vec![Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0)]).unwrap();
        assert!((ahlfors_ratio(&seg, Complex64::new(2.0, 0.0), 2.0) - 2.0).abs() < 1e-15);
        let a = ahlfors_constant(&seg, 4, 8, 0).unwrap();
        assert!((a.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn thin_rectangle_matches_dense_search() {
        let c = Complex64::new;
        let rect =
            PolygonalCurve::closed(vec![c(0.0, 0.0), c(10.0, 0.0), c(10.0, 0.1), c(0.0, 0.1)])
                .unwrap();
        let a = ahlfors_constant(&rect, 64, 48, 2).unwrap();
        // The centroid disk enclosing the whole curve is always probed.
        let whole = 20.2 / (25.0f64 + 0.0025).sqrt();
        assert!(a.value >= whole * (1.0 - 1e-8));
        // Dense search near one end (by symmetry the ends dominate): a disk
        // reaching past both long sides and the short side beats the centroid.
        let mut oracle = whole;
        for i in 0..=150 {
            for k in 0..=150 {
                let w = c(0.3 * i as f64 / 150.0, -0.1 + 0.3 * k as f64 / 150.0);
                for m in 0..=100 {
                    let r = 0.01 * 100f64.powf(m as f64 / 100.0);
                    oracle = oracle.max(ahlfors_ratio(&rect, w, r));
                }
            }
        }
        assert!(
            oracle > 4.4 && a.value <= oracle + 1e-9,
            "{} vs {oracle}",
            a.value
        );
    }
}
