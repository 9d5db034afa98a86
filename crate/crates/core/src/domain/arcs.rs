use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ConstantEstimate, DEGENERATE_CHORD, EXHAUSTIVE_LIMIT};
use crate::error::{Error, Result};
use crate::geometry::{point_set_diameter, PolygonalCurve};
use crate::scalar::{lit, Real};

/// Vertex pairs `(i, j)` with `i < j` used by the pair-based constants.
#[derive(Debug, Clone, PartialEq)]
pub struct PairProbes {
    pub pairs: Vec<(usize, usize)>,
    pub exhaustive: bool,
}

// Additive recurrence on the plastic number (the R2 sequence).
const R2_ALPHA: [f64; 2] = [0.754_877_666_246_692_8, 0.569_840_290_998_053_3];

/// All pairs when `n ≤ 1024` or when `pairs` covers every pair; otherwise
/// the first `pairs` points of a seeded low-discrepancy sequence on the unit
/// square, so a larger count always extends a smaller one.
pub fn pair_probes(n: usize, pairs: usize, seed: u64) -> PairProbes {
    let total = n * n.saturating_sub(1) / 2;
    if n <= EXHAUSTIVE_LIMIT || pairs >= total {
        let pairs = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        return PairProbes {
            pairs,
            exhaustive: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 2] = [rng.gen(), rng.gen()];
    let mut out = Vec::with_capacity(pairs);
    let mut k = 0u64;
    while out.len() < pairs {
        k += 1;
        let u = (shift[0] + k as f64 * R2_ALPHA[0]).fract();
        let v = (shift[1] + k as f64 * R2_ALPHA[1]).fract();
        let i = ((u * n as f64) as usize).min(n - 1);
        let j = ((v * n as f64) as usize).min(n - 1);
        if i != j {
            out.push((i.min(j), i.max(j)));
        }
    }
    PairProbes {
        pairs: out,
        exhaustive: false,
    }
}

/// Length of the shorter arc between vertices `i < j` and whether it is the
/// forward arc `i → j`. Ties go to the forward arc.
pub fn shorter_arc<T: Real>(prefix: &[T], i: usize, j: usize) -> (T, bool) {
    let total = prefix[prefix.len() - 1];
    let forward = prefix[j] - prefix[i];
    let backward = total - forward;
    if forward <= backward {
        (forward, true)
    } else {
        (backward, false)
    }
}

fn require_closed<T: Real>(curve: &PolygonalCurve<T>) -> Result<()> {
    if !curve.is_closed() {
        return Err(Error::InvalidCurve(
            "pair constants need a closed curve".into(),
        ));
    }
    Ok(())
}

fn fold_ratios<T: Real>(
    ratios: impl IntoIterator<Item = Option<T>>,
    exhaustive: bool,
) -> ConstantEstimate<T> {
    let mut est = ConstantEstimate {
        value: T::one(),
        probes: 0,
        degenerate: 0,
        exhaustive,
    };
    let mut best = T::neg_infinity();
    for r in ratios {
        match r {
            Some(r) => {
                est.probes += 1;
                best = best.max(r);
            }
            None => est.degenerate += 1,
        }
    }
    if est.probes > 0 {
        est.value = best;
    }
    est
}

/// `max ℓ(shorter arc)/|z − w|` over vertex pairs.
pub fn lavrentiev_constant<T: Real>(
    curve: &PolygonalCurve<T>,
    pairs: usize,
    seed: u64,
) -> Result<ConstantEstimate<T>> {
    require_closed(curve)?;
    let v = curve.vertices();
    let prefix = curve.prefix_lengths();
    let probes = pair_probes(v.len(), pairs, seed);
    let tiny = lit::<T>(DEGENERATE_CHORD);
    let ratios: Vec<Option<T>> = probes
        .pairs
        .par_iter()
        .map(|&(i, j)| {
            let chord = (v[j] - v[i]).norm();
            (chord >= tiny).then(|| shorter_arc(&prefix, i, j).0 / chord)
        })
        .collect();
    Ok(fold_ratios(ratios, probes.exhaustive))
}

fn arc_vertices<T: Real>(v: &[Complex<T>], i: usize, j: usize, forward: bool) -> Vec<Complex<T>> {
    if forward {
        v[i..=j].to_vec()
    } else {
        v[j..].iter().chain(&v[..=i]).copied().collect()
    }
}

/// `max diam(shorter arc)/|z − w|` over vertex pairs.
pub fn quasicircle_constant<T: Real>(
    curve: &PolygonalCurve<T>,
    pairs: usize,
    seed: u64,
) -> Result<ConstantEstimate<T>> {
    require_closed(curve)?;
    let v = curve.vertices();
    let n = v.len();
    let prefix = curve.prefix_lengths();
    let probes = pair_probes(n, pairs, seed);
    let tiny = lit::<T>(DEGENERATE_CHORD);
    if !probes.exhaustive {
        let ratios: Vec<Option<T>> = probes
            .pairs
            .par_iter()
            .map(|&(i, j)| {
                let chord = (v[j] - v[i]).norm();
                if chord < tiny {
                    return None;
                }
                let (_, forward) = shorter_arc(&prefix, i, j);
                Some(point_set_diameter(&arc_vertices(v, i, j, forward)) / chord)
            })
            .collect();
        return Ok(fold_ratios(ratios, false));
    }
    // Walk forward from every start vertex, growing the arc one vertex at a
    // time and keeping its diameter; each pair is scored from the start
    // vertex whose forward arc is the shorter one.
    let per_start: Vec<Vec<Option<T>>> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            let mut diam = T::zero();
            for m in 1..n {
                let j = (s + m) % n;
                let newest = v[j];
                for step in 0..m {
                    diam = diam.max((newest - v[(s + step) % n]).norm());
                }
                let (a, b) = (s.min(j), s.max(j));
                let (_, forward) = shorter_arc(&prefix, a, b);
                let chosen_start = if forward { a } else { b };
                if chosen_start != s {
                    let total = prefix[n];
                    let fwd = if j > s {
                        prefix[j] - prefix[s]
                    } else {
                        total - (prefix[s] - prefix[j])
                    };
                    if fwd > total * lit(0.5 + 1e-9) {
                        // Forward arcs from `s` only lengthen from here on.
                        break;
                    }
                    continue;
                }
                let chord = (v[b] - v[a]).norm();
                out.push((chord >= tiny).then(|| diam / chord));
            }
            out
        })
        .collect();
    Ok(fold_ratios(per_start.into_iter().flatten(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn square() -> PolygonalCurve<f64> {
        let c = Complex64::new;
        PolygonalCurve::closed(vec![c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0)])
            .unwrap()
    }

    fn brute_quasicircle(curve: &PolygonalCurve<f64>) -> f64 {
        let v = curve.vertices();
        let prefix = curve.prefix_lengths();
        let mut best = 1.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let (_, fwd) = shorter_arc(&prefix, i, j);
                let arc = arc_vertices(v, i, j, fwd);
                let mut d = 0.0f64;
                for a in &arc {
                    for b in &arc {
                        d = d.max((a - b).norm());
                    }
                }
                best = best.max(d / (v[j] - v[i]).norm());
            }
        }
        best
    }

    #[test]
    fn circle_constants() {
        let circle = PolygonalCurve::regular(4096, Complex64::new(0.0, 0.0), 1.0).unwrap();
        let lav = lavrentiev_constant(&circle, 20_000, 7).unwrap();
        assert!(!lav.exhaustive);
        assert!((lav.value - PI / 2.0).abs() < 1e-3, "{}", lav.value);
        let qc = quasicircle_constant(&circle, 2_000, 7).unwrap();
        assert!((qc.value - 1.0).abs() < 1e-3, "{}", qc.value);
        let small = PolygonalCurve::regular(256, Complex64::new(0.0, 0.0), 1.0).unwrap();
        let qc = quasicircle_constant(&small, 0, 0).unwrap();
        assert!(qc.exhaustive && (qc.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_constants() {
        let lav = lavrentiev_constant(&square(), 0, 0).unwrap();
        assert!((lav.value - 2f64.sqrt()).abs() < 1e-15);
        let qc = quasicircle_constant(&square(), 0, 0).unwrap();
        assert!(qc.value >= 1.0 && qc.value <= 2f64.sqrt() + 1e-15);
        assert_eq!(qc.value, brute_quasicircle(&square()));
        assert_eq!(qc.probes, 6);
    }

    #[test]
    fn sweep_matches_brute_force() {
        let c = Complex64::new;
        let blob = PolygonalCurve::closed(
            (0..40)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / 40.0;
                    c(0.0, t).exp() * (1.0 + 0.3 * (3.0 * t).cos())
                })
                .collect(),
        )
        .unwrap();
        let qc = quasicircle_constant(&blob, 0, 0).unwrap();
        assert_eq!(qc.value, brute_quasicircle(&blob));
        assert_eq!(qc.probes, 40 * 39 / 2);
    }

    #[test]
    fn triangle_is_at_least_one() {
        let c = Complex64::new;
        let tri = PolygonalCurve::closed(vec![c(0.0, 0.0), c(3.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(lavrentiev_constant(&tri, 0, 0).unwrap().value >= 1.0);
        assert!(quasicircle_constant(&tri, 0, 0).unwrap().value >= 1.0);
    }

    #[test]
    fn sampling_is_nested_and_seeded() {
        let a = pair_probes(5000, 100, 3);
        let b = pair_probes(5000, 300, 3);
        assert_eq!(a.pairs[..], b.pairs[..100]);
        assert_ne!(pair_probes(5000, 100, 4).pairs, a.pairs);
    }
}
