use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, lit, Real};

/// Polyline approximation of a curve. Closed curves wrap from the last
/// vertex back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalCurve<T: Real> {
    vertices: Vec<Complex<T>>,
    closed: bool,
}

fn cross<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

impl<T: Real> PolygonalCurve<T> {
    pub fn new(vertices: Vec<Complex<T>>, closed: bool) -> Result<Self> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(Error::InvalidCurve(format!(
                "{} curve needs at least {min} vertices, got {}",
                if closed { "closed" } else { "open" },
                vertices.len()
            )));
        }
        if let Some(bad) = vertices
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidCurve(format!("vertex {bad} is not finite")));
        }
        let curve = Self { vertices, closed };
        if let Some(k) = curve.segments().position(|(a, b)| a == b) {
            return Err(Error::InvalidCurve(format!(
                "vertices {k} and {} coincide",
                (k + 1) % curve.len()
            )));
        }
        Ok(curve)
    }

    pub fn closed(vertices: Vec<Complex<T>>) -> Result<Self> {
        Self::new(vertices, true)
    }

    pub fn open(vertices: Vec<Complex<T>>) -> Result<Self> {
        Self::new(vertices, false)
    }

    /// Regular `n`-gon inscribed in the circle `|z − centre| = radius`.
    pub fn regular(n: usize, centre: Complex<T>, radius: T) -> Result<Self> {
        let two_pi = T::PI() + T::PI();
        let vs = (0..n)
            .map(|k| {
                centre
                    + crate::scalar::cis(
                        two_pi * crate::scalar::from_usize(k) / crate::scalar::from_usize(n),
                    ) * radius
            })
            .collect();
        Self::closed(vs)
    }

    pub fn vertices(&self) -> &[Complex<T>] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex<T>, Complex<T>)> + '_ {
        let n = self.len();
        (0..self.segment_count()).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    /// Σ |v_{k+1} − v_k|.
    pub fn length(&self) -> T {
        compensated_sum(self.segments().map(|(a, b)| (b - a).norm()))
    }

    /// Cumulative arc length at each vertex; `prefix[0] = 0` and the last
    /// entry (index `len`) is the total length for closed curves.
    pub fn prefix_lengths(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = crate::scalar::CompensatedSum::new();
        out.push(T::zero());
        for (a, b) in self.segments() {
            acc.push((b - a).norm());
            out.push(acc.total());
        }
        out
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> T {
        hull_diameter(&convex_hull(&self.vertices))
    }

    /// Shoelace signed area (positive for counter-clockwise curves).
    pub fn signed_area(&self) -> T {
        let s = compensated_sum(self.segments().map(|(a, b)| cross(a, b)));
        s * lit(0.5)
    }

    /// First pair of non-adjacent segments that intersect, if any.
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let segs: Vec<_> = self.segments().collect();
        let m = segs.len();
        for i in 0..m {
            for j in i + 1..m {
                let adjacent = j == i + 1 || (self.closed && i == 0 && j == m - 1);
                if adjacent {
                    // Adjacent segments share a vertex; they only conflict if
                    // they fold back onto each other.
                    let (a, b) = segs[i];
                    let (c, d) = segs[j];
                    let (u, v) = (b - a, d - c);
                    let shared_fold =
                        cross(u, v) == T::zero() && u.re * v.re + u.im * v.im < T::zero();
                    if shared_fold {
                        return Some((i, j));
                    }
                    continue;
                }
                if segments_intersect(segs[i], segs[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Euclidean distance from `w` to the polyline.
    pub fn distance_to(&self, w: Complex<T>) -> T {
        self.segments()
            .map(|(a, b)| point_segment_distance(w, a, b))
            .fold(T::infinity(), T::min)
    }

    /// Length of the part of the polyline inside the closed disk `|z − w| ≤ r`.
    pub fn length_inside_disk(&self, w: Complex<T>, r: T) -> T {
        compensated_sum(
            self.segments()
                .map(|(a, b)| segment_length_in_disk(a, b, w, r)),
        )
    }

    /// Even–odd test for closed curves.
    pub fn contains(&self, p: Complex<T>) -> bool {
        if !self.closed {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.segments() {
            if (a.im > p.im) != (b.im > p.im) {
                let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
                if p.re < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a).re * d.re + (p - a).im * d.im) / len2;
    let t = t.max(T::zero()).min(T::one());
    (p - (a + d * t)).norm()
}

/// Exact length of `[a, b] ∩ {|z − w| ≤ r}`.
pub fn segment_length_in_disk<T: Real>(a: Complex<T>, b: Complex<T>, w: Complex<T>, r: T) -> T {
    let d = b - a;
    let len = d.norm();
    if len == T::zero() {
        return T::zero();
    }
    let u = d / len;
    let p = a - w;
    // |p + s u|² = r², s ∈ [0, len]
    let bq = p.re * u.re + p.im * u.im;
    let c = p.norm_sqr() - r * r;
    let disc = bq * bq - c;
    if disc <= T::zero() {
        return T::zero();
    }
    let root = disc.sqrt();
    let s0 = (-bq - root).max(T::zero());
    let s1 = (-bq + root).min(len);
    (s1 - s0).max(T::zero())
}

fn orient<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>) -> T {
    cross(b - a, c - a)
}

fn on_segment<T: Real>(a: Complex<T>, b: Complex<T>, p: Complex<T>) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect<T: Real>(
    s: (Complex<T>, Complex<T>),
    t: (Complex<T>, Complex<T>),
) -> bool {
    let (a, b) = s;
    let (c, d) = t;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    let zero = T::zero();
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
        && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    {
        return true;
    }
    (d1 == zero && on_segment(c, d, a))
        || (d2 == zero && on_segment(c, d, b))
        || (d3 == zero && on_segment(a, b, c))
        || (d4 == zero && on_segment(a, b, d))
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
pub fn convex_hull<T: Real>(points: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut pts: Vec<Complex<T>> = points.to_vec();
    pts.sort_by(|p, q| {
        p.re.partial_cmp(&q.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(p.im.partial_cmp(&q.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex<T>> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero()
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower
            && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero()
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Diameter of a convex polygon given counter-clockwise (rotating calipers).
pub fn hull_diameter<T: Real>(hull: &[Complex<T>]) -> T {
    let n = hull.len();
    match n {
        0 | 1 => return T::zero(),
        2 => return (hull[1] - hull[0]).norm(),
        _ => {}
    }
    let mut best = T::zero();
    let mut j = 1;
    for i in 0..n {
        let ni = (i + 1) % n;
        let edge = hull[ni] - hull[i];
        while cross(edge, hull[(j + 1) % n] - hull[i]).abs() > cross(edge, hull[j] - hull[i]).abs()
        {
            j = (j + 1) % n;
        }
        best = best
            .max((hull[j] - hull[i]).norm())
            .max((hull[j] - hull[ni]).norm());
    }
    best
}

/// Diameter of an arbitrary point set.
pub fn point_set_diameter<T: Real>(points: &[Complex<T>]) -> T {
    hull_diameter(&convex_hull(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> PolygonalCurve<f64> {
        PolygonalCurve::closed(vec![c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0)])
            .unwrap()
    }

    #[test]
    fn length_examples() {
        assert_eq!(square().length(), 8.0);
        let n = 4096;
        let poly = PolygonalCurve::regular(n, c(0.0, 0.0), 1.0).unwrap();
        let oracle = 2.0 * n as f64 * (std::f64::consts::PI / n as f64).sin();
        assert!((poly.length() - oracle).abs() < 1e-12);
        assert!((poly.length() - 2.0 * std::f64::consts::PI).abs() < 1e-5);
        assert_eq!(
            PolygonalCurve::open(vec![c(0.0, 0.0), c(1.0, 0.0)])
                .unwrap()
                .length(),
            1.0
        );
    }

    #[test]
    fn diameter_examples() {
        assert!((square().diameter() - 8f64.sqrt()).abs() < 1e-15);
        let poly = PolygonalCurve::regular(4096, c(0.0, 0.0), 1.0).unwrap();
        assert!((poly.diameter() - 2.0).abs() < 1e-6);
        assert_eq!(
            PolygonalCurve::open(vec![c(0.0, 0.0), c(1.0, 0.0)])
                .unwrap()
                .diameter(),
            1.0
        );
    }

    #[test]
    fn validation() {
        assert!(PolygonalCurve::closed(vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(PolygonalCurve::closed(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(
            PolygonalCurve::closed(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)])
                .is_err()
        );
    }

    #[test]
    fn shoelace_and_self_intersection() {
        assert_eq!(square().signed_area(), 4.0);
        assert!(square().find_self_intersection().is_none());
        let bowtie =
            PolygonalCurve::closed(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)])
                .unwrap();
        assert!(bowtie.find_self_intersection().is_some());
        let fold = PolygonalCurve::closed(vec![c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)])
            .unwrap();
        assert!(fold.find_self_intersection().is_some());
    }

    #[test]
    fn distances_and_disk_clipping() {
        let sq = square();
        assert!((sq.distance_to(c(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((sq.distance_to(c(0.5, 0.2)) - 0.5).abs() < 1e-15);
        let seg = PolygonalCurve::open(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!((seg.length_inside_disk(c(1.0, 0.0), 1.0) / 1.0 - 2.0).abs() < 1e-15);
        assert!((seg.length_inside_disk(c(1.0, 0.5), 0.5)).abs() < 1e-15);
        assert!(sq.contains(c(0.1, 0.9)) && !sq.contains(c(1.1, 0.0)));
    }

    proptest! {
        #[test]
        fn calipers_match_brute_force(pts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..60)) {
            let pts: Vec<Complex64> = pts.into_iter().map(|(x, y)| c(x, y)).collect();
            let mut brute = 0.0f64;
            for a in &pts { for b in &pts { brute = brute.max((a - b).norm()); } }
            prop_assert!((point_set_diameter(&pts) - brute).abs() <= 1e-12 * brute.max(1.0));
        }

        #[test]
        fn disk_clip_matches_sampling(ax in -2.0f64..2.0, ay in -2.0f64..2.0, bx in -2.0f64..2.0, by in -2.0f64..2.0, r in 0.1f64..2.0) {
            let (a, b) = (c(ax, ay), c(bx, by));
            let exact = segment_length_in_disk(a, b, c(0.0, 0.0), r);
            let n = 20000;
            let inside = (0..n).filter(|&k| (a + (b - a) * ((k as f64 + 0.5) / n as f64)).norm() <= r).count();
            let sampled = (b - a).norm() * inside as f64 / n as f64;
            prop_assert!((exact - sampled).abs() <= 2.0 * (b - a).norm() / n as f64 + 1e-12);
        }
    }
}
