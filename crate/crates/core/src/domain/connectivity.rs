use std::collections::VecDeque;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ConstantEstimate;
use crate::error::{Error, Result};
use crate::geometry::{point_set_diameter, PolygonalCurve};
use crate::scalar::{from_usize, lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityConfig {
    /// Raster resolution along the longer side of the bounding box.
    pub grid: usize,
    /// Interior point pairs to probe.
    pub pairs: usize,
    /// Smallest accepted pair distance, in raster cells.
    pub min_separation_cells: f64,
}

impl Default for ConnectivityConfig {
    fn default() -> Self {
        Self {
            grid: 512,
            pairs: 48,
            min_separation_cells: 64.0,
        }
    }
}

/// Square-cell rasterization of the region bounded by a closed polygon.
#[derive(Debug, Clone)]
pub struct Raster<T> {
    origin: Complex<T>,
    cell: T,
    nx: usize,
    ny: usize,
    inside: Vec<bool>,
}

impl<T: Real> Raster<T> {
    /// Cell centres are classified by an even–odd scanline fill.
    pub fn new(curve: &PolygonalCurve<T>, grid: usize) -> Result<Self> {
        if !curve.is_closed() {
            return Err(Error::InvalidCurve("region boundary must be closed".into()));
        }
        if grid < 8 {
            return Err(Error::param(
                "grid",
                format!("must be at least 8, got {grid}"),
            ));
        }
        let v = curve.vertices();
        let (mut lo, mut hi) = (v[0], v[0]);
        for p in v {
            lo = Complex::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let side = (hi.re - lo.re).max(hi.im - lo.im);
        let cell = side / from_usize(grid);
        let nx = ((to_f64((hi.re - lo.re) / cell)).ceil() as usize).max(1);
        let ny = ((to_f64((hi.im - lo.im) / cell)).ceil() as usize).max(1);
        let mut inside = vec![false; nx * ny];
        let half = cell * lit(0.5);
        let mut crossings: Vec<T> = Vec::new();
        for iy in 0..ny {
            let y = lo.im + cell * from_usize(iy) + half;
            crossings.clear();
            for (a, b) in curve.segments() {
                if (a.im > y) != (b.im > y) {
                    crossings.push(a.re + (y - a.im) * (b.re - a.re) / (b.im - a.im));
                }
            }
            crossings.sort_by(|p, q| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal));
            for span in crossings.chunks_exact(2) {
                for ix in 0..nx {
                    let x = lo.re + cell * from_usize(ix) + half;
                    if x > span[0] && x < span[1] {
                        inside[iy * nx + ix] = true;
                    }
                }
            }
        }
        Ok(Self {
            origin: lo,
            cell,
            nx,
            ny,
            inside,
        })
    }

    pub fn cell_size(&self) -> T {
        self.cell
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn is_inside(&self, idx: usize) -> bool {
        self.inside[idx]
    }

    pub fn inside_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.inside.len()).filter(|&i| self.inside[i])
    }

    pub fn center(&self, idx: usize) -> Complex<T> {
        let half = self.cell * lit(0.5);
        Complex::new(
            self.origin.re + self.cell * from_usize(idx % self.nx) + half,
            self.origin.im + self.cell * from_usize(idx / self.nx) + half,
        )
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = ((idx % self.nx) as isize, (idx / self.nx) as isize);
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        (-1isize..=1)
            .flat_map(move |dy| (-1isize..=1).map(move |dx| (x + dx, y + dy)))
            .filter(move |&(a, b)| (a, b) != (x, y) && a >= 0 && b >= 0 && a < nx && b < ny)
            .map(move |(a, b)| (b * nx + a) as usize)
    }

    /// 8-connected path of inside cells from `p` to `q` staying in the lens
    /// `|x − p| ≤ d ∧ |x − q| ≤ d`, if one exists.
    pub fn lens_path(&self, p: usize, q: usize, d: T) -> Option<Vec<usize>> {
        let (cp, cq) = (self.center(p), self.center(q));
        let admissible = |i: usize| {
            let c = self.center(i);
            self.inside[i] && (c - cp).norm() <= d && (c - cq).norm() <= d
        };
        if !admissible(p) || !admissible(q) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.inside.len()];
        parent[p] = p;
        let mut queue = VecDeque::from([p]);
        while let Some(i) = queue.pop_front() {
            if i == q {
                let mut path = vec![q];
                let mut cur = q;
                while cur != p {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for j in self.neighbours(i) {
                if parent[j] == usize::MAX && admissible(j) {
                    parent[j] = i;
                    queue.push_back(j);
                }
            }
        }
        None
    }
}

/// `max (min path diameter)/|z₁ − z₂|` over seeded interior pairs.
///
/// For each pair the smallest lens radius admitting a raster path is found
/// by bisection; the diameter of that path is the pair's score.
pub fn linear_connectivity_constant<T: Real>(
    boundary: &PolygonalCurve<T>,
    cfg: &ConnectivityConfig,
    seed: u64,
) -> Result<ConstantEstimate<T>> {
    let raster = Raster::new(boundary, cfg.grid)?;
    let cells: Vec<usize> = raster.inside_cells().collect();
    if cells.len() < 2 {
        return Err(Error::PathNotFound { grid: cfg.grid });
    }
    let min_sep = raster.cell_size() * lit(cfg.min_separation_cells);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(cfg.pairs);
    let mut attempts = 0;
    while pairs.len() < cfg.pairs && attempts < 1000 * cfg.pairs.max(1) {
        attempts += 1;
        let p = cells[rng.gen_range(0..cells.len())];
        let q = cells[rng.gen_range(0..cells.len())];
        if (raster.center(p) - raster.center(q)).norm() >= min_sep {
            pairs.push((p, q));
        }
    }
    if pairs.is_empty() {
        return Err(Error::param(
            "min_separation_cells",
            "no interior pair is that far apart on this raster",
        ));
    }
    let (nx, ny) = raster.dims();
    let span = raster.cell_size() * from_usize(nx.max(ny)) * lit(2.0);
    let scores: Vec<Result<T>> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let dist = (raster.center(p) - raster.center(q)).norm();
            let path = match raster.lens_path(p, q, dist) {
                Some(path) => path,
                None => {
                    if raster.lens_path(p, q, span).is_none() {
                        return Err(Error::PathNotFound { grid: cfg.grid });
                    }
                    let (mut lo, mut hi) = (dist, span);
                    while hi - lo > dist * lit(1e-3) {
                        let mid = (lo + hi) * lit(0.5);
                        if raster.lens_path(p, q, mid).is_some() {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    raster.lens_path(p, q, hi).expect("feasible lens radius")
                }
            };
            let pts: Vec<Complex<T>> = path.iter().map(|&i| raster.center(i)).collect();
            Ok(point_set_diameter(&pts) / dist)
        })
        .collect();
    let mut best = T::one();
    for s in scores {
        best = best.max(s?);
    }
    Ok(ConstantEstimate {
        value: best,
        probes: pairs.len(),
        degenerate: 0,
        exhaustive: false,
    })
}
