//! Integration and one-dimensional search primitives.
//!
//! Every routine evaluates its integrand in a fixed order and sums with
//! compensation, so results are bitwise reproducible for a given input.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, from_usize, lit, to_f64, Accumulate, CompensatedSum, Real};

/// Result of a quadrature together with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V, T> {
    pub value: V,
    pub error: T,
    pub evals: usize,
}

impl<V: Copy, T: Real> Estimate<V, T> {
    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> Estimate<W, T> {
        Estimate {
            value: f(self.value),
            error: self.error,
            evals: self.evals,
        }
    }
}

/// Absolute and relative tolerance pair; convergence means
/// `error <= max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    pub fn target(&self, magnitude: T) -> T {
        self.abs.max(self.rel * magnitude)
    }
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1], as tabulated.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel<V, T> {
    a: T,
    b: T,
    value: V,
    error: T,
}

impl<V, T: Real> PartialEq for Panel<V, T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V, T: Real> Eq for Panel<V, T> {}
impl<V, T: Real> PartialOrd for Panel<V, T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V, T: Real> Ord for Panel<V, T> {
    // Largest error first; ties go to the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

fn kronrod_panel<T, V, F>(f: &F, a: T, b: T) -> Result<Panel<V, T>>
where
    T: Real,
    V: Accumulate<Scalar = T>,
    F: Fn(T) -> Result<V>,
{
    let half = (b - a) * lit(0.5);
    let centre = a + half;
    let mut values = [V::zero(); 15];
    values[7] = f(centre)?;
    for j in 0..7 {
        let dx = half * lit::<T>(XGK[j]);
        values[j] = f(centre - dx)?;
        values[14 - j] = f(centre + dx)?;
    }
    let mut kronrod = CompensatedSum::new();
    let mut gauss = CompensatedSum::new();
    kronrod.push(values[7].scale(lit(WGK[7])));
    gauss.push(values[7].scale(lit(WG[3])));
    for j in 0..7 {
        let pair = values[j].add(values[14 - j]);
        kronrod.push(pair.scale(lit(WGK[j])));
        if j % 2 == 1 {
            gauss.push(pair.scale(lit(WG[j / 2])));
        }
    }
    let k = kronrod.total();
    let g = gauss.total();
    let mean = k.scale(lit(0.5));
    let mut resasc = T::zero();
    let mut resabs = T::zero();
    for j in 0..15 {
        let w = lit::<T>(WGK[if j < 8 { j } else { 14 - j }]);
        resasc += w * values[j].sub(mean).magnitude();
        resabs += w * values[j].magnitude();
    }
    let abs_half = half.abs();
    let resasc = resasc * abs_half;
    let resabs = resabs * abs_half;
    let mut error = k.sub(g).magnitude() * abs_half;
    if resasc > T::zero() && error > T::zero() {
        let scale = (lit::<T>(200.0) * error / resasc).powf(lit(1.5));
        error = resasc * scale.min(T::one());
    }
    let floor = lit::<T>(50.0) * T::epsilon() * resabs;
    if floor > error {
        error = floor;
    }
    Ok(Panel {
        a,
        b,
        value: k.scale(half),
        error,
    })
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on `[a, b]`.
///
/// The interval is first cut into `initial_panels` equal pieces (useful for
/// periodic integrands), then the panel with the largest error estimate is
/// bisected until the summed estimate meets `tol`.
pub fn gauss_kronrod<T, V, F>(
    f: F,
    a: T,
    b: T,
    tol: Tolerance<T>,
    max_panels: usize,
    initial_panels: usize,
    what: &'static str,
) -> Result<Estimate<V, T>>
where
    T: Real,
    V: Accumulate<Scalar = T>,
    F: Fn(T) -> Result<V>,
{
    if a == b {
        return Ok(Estimate {
            value: V::zero(),
            error: T::zero(),
            evals: 0,
        });
    }
    let initial = initial_panels.max(1);
    let width = (b - a) / from_usize(initial);
    let mut heap = BinaryHeap::with_capacity(initial * 2);
    for k in 0..initial {
        let lo = a + width * from_usize(k);
        let hi = if k + 1 == initial { b } else { lo + width };
        heap.push(kronrod_panel(&f, lo, hi)?);
    }
    let mut evals = 15 * initial;
    loop {
        let value = compensated_sum(heap.iter().map(|p| p.value));
        let error = compensated_sum(heap.iter().map(|p| p.error));
        if error <= tol.target(value.magnitude()) {
            return Ok(finish(heap.into_vec(), evals));
        }
        if heap.len() >= max_panels {
            return Err(Error::QuadratureNonconvergence {
                what,
                subdivisions: heap.len(),
                error_estimate: to_f64(error),
            });
        }
        let worst = heap.pop().expect("nonempty panel heap");
        let mid = worst.a + (worst.b - worst.a) * lit(0.5);
        if mid <= worst.a || mid >= worst.b {
            // Panel at machine resolution; keep it and stop refining.
            heap.push(worst);
            return Ok(finish(heap.into_vec(), evals));
        }
        heap.push(kronrod_panel(&f, worst.a, mid)?);
        heap.push(kronrod_panel(&f, mid, worst.b)?);
        evals += 30;
    }
}

fn finish<T: Real, V: Accumulate<Scalar = T>>(
    mut panels: Vec<Panel<V, T>>,
    evals: usize,
) -> Estimate<V, T> {
    panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap_or(Ordering::Equal));
    Estimate {
        value: compensated_sum(panels.iter().map(|p| p.value)),
        error: compensated_sum(panels.iter().map(|p| p.error)),
        evals,
    }
}

/// Adaptive composite Simpson rule with an absolute tolerance.
///
/// Local acceptance is the classical `|S₂ − S₁| ≤ 15·tol_local` test with
/// `tol_local` proportional to the panel width; accepted panels carry the
/// Richardson correction.
pub fn simpson_adaptive<T, V, F>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    max_panels: usize,
    initial_panels: usize,
    what: &'static str,
) -> Result<Estimate<V, T>>
where
    T: Real,
    V: Accumulate<Scalar = T>,
    F: Fn(T) -> Result<V>,
{
    struct Work<V, T> {
        a: T,
        b: T,
        fa: V,
        fm: V,
        fb: V,
        whole: V,
    }
    let total_width = (b - a).abs();
    if total_width == T::zero() {
        return Ok(Estimate {
            value: V::zero(),
            error: T::zero(),
            evals: 0,
        });
    }
    let six = lit::<T>(6.0);
    let four = lit::<T>(4.0);
    let simpson = |fa: V, fm: V, fb: V, h: T| fa.add(fm.scale(four)).add(fb).scale(h / six);

    let initial = initial_panels.max(1);
    let width = (b - a) / from_usize(initial);
    let mut nodes = Vec::with_capacity(2 * initial + 1);
    for k in 0..=2 * initial {
        let x = if k == 2 * initial {
            b
        } else {
            a + width * from_usize(k) * lit(0.5)
        };
        nodes.push((x, f(x)?));
    }
    let mut evals = nodes.len();
    let mut stack = Vec::with_capacity(64);
    for k in (0..initial).rev() {
        let (xa, fa) = nodes[2 * k];
        let (_, fm) = nodes[2 * k + 1];
        let (xb, fb) = nodes[2 * k + 2];
        stack.push(Work {
            a: xa,
            b: xb,
            fa,
            fm,
            fb,
            whole: simpson(fa, fm, fb, xb - xa),
        });
    }

    let mut sum = CompensatedSum::new();
    let mut err = CompensatedSum::<T>::new();
    let mut panels = initial;
    let fifteen = lit::<T>(15.0);
    while let Some(w) = stack.pop() {
        let m = w.a + (w.b - w.a) * lit(0.5);
        let lm = w.a + (m - w.a) * lit(0.5);
        let rm = m + (w.b - m) * lit(0.5);
        let flm = f(lm)?;
        let frm = f(rm)?;
        evals += 2;
        let left = simpson(w.fa, flm, w.fm, m - w.a);
        let right = simpson(w.fm, frm, w.fb, w.b - m);
        let refined = left.add(right);
        let diff = refined.sub(w.whole);
        let local_tol = abs_tol * (w.b - w.a).abs() / total_width;
        let at_resolution = lm <= w.a || rm >= w.b;
        if diff.magnitude() <= fifteen * local_tol || at_resolution {
            sum.push(refined.add(diff.scale(fifteen.recip())));
            err.push(diff.magnitude() / fifteen);
            continue;
        }
        panels += 1;
        if panels > max_panels {
            return Err(Error::QuadratureNonconvergence {
                what,
                subdivisions: panels,
                error_estimate: to_f64(diff.magnitude()),
            });
        }
        stack.push(Work {
            a: m,
            b: w.b,
            fa: w.fm,
            fm: frm,
            fb: w.fb,
            whole: right,
        });
        stack.push(Work {
            a: w.a,
            b: m,
            fa: w.fa,
            fm: flm,
            fb: w.fm,
            whole: left,
        });
    }
    Ok(Estimate {
        value: sum.total(),
        error: err.total(),
        evals,
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss–Legendre rule needs at least one node");
    let mut x = vec![0.0_f64; n];
    let mut w = vec![0.0_f64; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (
        x.into_iter().map(lit).collect(),
        w.into_iter().map(lit).collect(),
    )
}

/// Composite Gauss–Legendre rule with `panels` equal panels of `order` nodes.
pub fn composite_gauss_legendre<T, V, F>(f: F, a: T, b: T, panels: usize, order: usize) -> Result<V>
where
    T: Real,
    V: Accumulate<Scalar = T>,
    F: Fn(T) -> Result<V>,
{
    let (x, w) = gauss_legendre::<T>(order);
    let h = (b - a) / from_usize(panels);
    let half = h * lit(0.5);
    let mut acc = CompensatedSum::new();
    for p in 0..panels {
        let centre = a + h * from_usize(p) + half;
        for (xi, wi) in x.iter().zip(&w) {
            acc.push(f(centre + half * *xi)?.scale(*wi * half));
        }
    }
    Ok(acc.total())
}

/// Uniform trapezoid rule for a `period`-periodic integrand, returning the
/// mean value over one period.
pub fn periodic_mean<T, V, F>(f: F, nodes: usize, period: T) -> Result<V>
where
    T: Real,
    V: Accumulate<Scalar = T>,
    F: Fn(T) -> Result<V>,
{
    let h = period / from_usize(nodes);
    let mut acc = CompensatedSum::new();
    for k in 0..nodes {
        acc.push(f(h * from_usize(k))?);
    }
    Ok(acc.total().scale(from_usize::<T>(nodes).recip()))
}

/// Golden-section search for a maximum of a unimodal function on `[a, b]`.
pub fn golden_section_max<T, F>(
    f: F,
    mut a: T,
    mut b: T,
    x_tol: T,
    max_iter: usize,
) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let inv_phi = lit::<T>(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..max_iter {
        if (b - a).abs() <= x_tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Maximum of `f` over `[a, b)` (periodic) or `[a, b]`: a uniform grid scan
/// followed by golden-section refinement between the neighbours of the best
/// grid point. Returns `(argmax, max)`; never worse than the best grid value.
pub fn grid_refined_max<T, F>(f: F, a: T, b: T, grid: usize, periodic: bool) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
{
    let grid = grid.max(2);
    let count = if periodic { grid } else { grid + 1 };
    let h = (b - a) / from_usize(grid);
    let values: Vec<Result<T>> = (0..count)
        .into_par_iter()
        .map(|k| f(a + h * from_usize(k)))
        .collect();
    let mut best = 0;
    let mut best_val = T::neg_infinity();
    for (k, v) in values.into_iter().enumerate() {
        let v = v?;
        if v > best_val {
            best_val = v;
            best = k;
        }
    }
    let x_best = a + h * from_usize(best);
    let (lo, hi) = if periodic {
        (x_best - h, x_best + h)
    } else {
        ((x_best - h).max(a), (x_best + h).min(b))
    };
    let tol = (b - a).abs() * lit(1e-12);
    let (x_ref, f_ref) = golden_section_max(&f, lo, hi, tol, 200)?;
    if f_ref > best_val {
        let x = if periodic { wrap(x_ref, a, b) } else { x_ref };
        Ok((x, f_ref))
    } else {
        Ok((x_best, best_val))
    }
}

fn wrap<T: Real>(x: T, a: T, b: T) -> T {
    let period = b - a;
    let mut y = x;
    while y < a {
        y += period;
    }
    while y >= b {
        y -= period;
    }
    y
}
