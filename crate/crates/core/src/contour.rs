//! Gaussian kernel density over 2D positions and its isolines.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Density sampled at the centres of a `resolution × resolution` grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityField {
    pub resolution: usize,
    /// `[xmin, ymin, xmax, ymax]`: the point bounding box padded by `3h`.
    pub bounds: [f64; 4],
    pub bandwidth: f64,
    pub n_points: usize,
    /// Row-major, row `j` is the `j`-th cell row from `ymin`.
    pub values: Vec<f64>,
}

impl DensityField {
    pub fn cell_size(&self) -> (f64, f64) {
        let r = self.resolution as f64;
        ((self.bounds[2] - self.bounds[0]) / r, (self.bounds[3] - self.bounds[1]) / r)
    }

    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        let (cw, ch) = self.cell_size();
        [self.bounds[0] + (i as f64 + 0.5) * cw, self.bounds[1] + (j as f64 + 0.5) * ch]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.resolution + i]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// 5% of the bounding-box diagonal; 1.0 when all points coincide.
pub fn default_bandwidth(positions: &[[f64; 2]]) -> f64 {
    let (lo, hi) = bounding_box(positions);
    let diag = libm::hypot(hi[0] - lo[0], hi[1] - lo[1]);
    if diag > 0.0 && diag.is_finite() {
        0.05 * diag
    } else {
        1.0
    }
}

fn bounding_box(positions: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in positions {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    (lo, hi)
}

/// Exact Gaussian KDE at every cell centre:
/// `f(c) = 1/(n·2πh²) · Σ_p exp(−‖c − p‖² / 2h²)`.
///
/// The kernel factorises into per-column and per-row terms, which is how
/// it is evaluated here; no binning.
pub fn kde_grid(positions: &[[f64; 2]], h: f64, resolution: usize) -> Result<DensityField> {
    if positions.is_empty() {
        return Err(Error::InvalidArgument("density of an empty point set".into()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("bandwidth must be positive".into()));
    }
    if resolution < 8 {
        return Err(Error::InvalidArgument("resolution must be at least 8".into()));
    }
    let (lo, hi) = bounding_box(positions);
    if !(lo[0].is_finite() && lo[1].is_finite() && hi[0].is_finite() && hi[1].is_finite()) {
        return Err(Error::InvalidArgument("non-finite position".into()));
    }
    let pad = 3.0 * h;
    let mut field = DensityField {
        resolution,
        bounds: [lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad],
        bandwidth: h,
        n_points: positions.len(),
        values: vec![0.0; resolution * resolution],
    };
    let xs: Vec<f64> = (0..resolution).map(|i| field.cell_center(i, 0)[0]).collect();
    let ys: Vec<f64> = (0..resolution).map(|j| field.cell_center(0, j)[1]).collect();
    let inv = 1.0 / (2.0 * h * h);
    let mut ex = vec![0.0; resolution];
    let mut ey = vec![0.0; resolution];
    for p in positions {
        for (e, &x) in ex.iter_mut().zip(&xs) {
            *e = libm::exp(-(x - p[0]) * (x - p[0]) * inv);
        }
        for (e, &y) in ey.iter_mut().zip(&ys) {
            *e = libm::exp(-(y - p[1]) * (y - p[1]) * inv);
        }
        for (row, &fy) in field.values.chunks_mut(resolution).zip(&ey) {
            if fy == 0.0 {
                continue;
            }
            for (cell, &fx) in row.iter_mut().zip(&ex) {
                *cell += fx * fy;
            }
        }
    }
    let norm = 1.0 / (positions.len() as f64 * 2.0 * PI * h * h);
    for v in field.values.iter_mut() {
        *v *= norm;
    }
    Ok(field)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// Closed loops do not repeat their first point.
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContourSet {
    /// Strictly increasing.
    pub levels: Vec<f64>,
    /// `polylines[i]` traces `levels[i]`.
    pub polylines: Vec<Vec<Polyline>>,
}

/// Isolines at `i · max / (n_levels + 1)` for `i = 1..=n_levels`, by
/// marching squares over the cell-centre lattice with linear interpolation.
/// Saddles are resolved by the average of the four corners. A field with
/// no positive value yields no levels.
pub fn contour_polylines(f: &DensityField, n_levels: usize) -> Result<ContourSet> {
    if n_levels == 0 {
        return Err(Error::InvalidArgument("need at least one contour level".into()));
    }
    let max = f.max();
    if max <= 0.0 {
        return Ok(ContourSet { levels: Vec::new(), polylines: Vec::new() });
    }
    let levels: Vec<f64> = (1..=n_levels).map(|i| i as f64 * max / (n_levels + 1) as f64).collect();
    let polylines = levels.iter().map(|&t| march(f, t)).collect();
    Ok(ContourSet { levels, polylines })
}

// Lattice edges: horizontal (i,j)-(i+1,j) then vertical (i,j)-(i,j+1).
struct EdgeIds {
    r: usize,
}

impl EdgeIds {
    fn horizontal(&self, i: usize, j: usize) -> usize {
        j * (self.r - 1) + i
    }

    fn vertical(&self, i: usize, j: usize) -> usize {
        (self.r - 1) * self.r + j * self.r + i
    }

    fn count(&self) -> usize {
        2 * self.r * (self.r - 1)
    }

    fn endpoints(&self, e: usize) -> ((usize, usize), (usize, usize)) {
        let h = (self.r - 1) * self.r;
        if e < h {
            let (j, i) = (e / (self.r - 1), e % (self.r - 1));
            ((i, j), (i + 1, j))
        } else {
            let e = e - h;
            let (j, i) = (e / self.r, e % self.r);
            ((i, j), (i, j + 1))
        }
    }
}

fn march(f: &DensityField, level: f64) -> Vec<Polyline> {
    let r = f.resolution;
    let ids = EdgeIds { r };
    let inside = |i: usize, j: usize| f.value(i, j) > level;

    let mut segments: Vec<[usize; 2]> = Vec::new();
    for j in 0..r - 1 {
        for i in 0..r - 1 {
            let case = inside(i, j) as u8
                | (inside(i + 1, j) as u8) << 1
                | (inside(i + 1, j + 1) as u8) << 2
                | (inside(i, j + 1) as u8) << 3;
            let bottom = ids.horizontal(i, j);
            let top = ids.horizontal(i, j + 1);
            let left = ids.vertical(i, j);
            let right = ids.vertical(i + 1, j);
            let centre_inside =
                || (f.value(i, j) + f.value(i + 1, j) + f.value(i + 1, j + 1) + f.value(i, j + 1)) / 4.0 > level;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push([left, bottom]),
                2 | 13 => segments.push([bottom, right]),
                3 | 12 => segments.push([left, right]),
                4 | 11 => segments.push([right, top]),
                6 | 9 => segments.push([bottom, top]),
                7 | 8 => segments.push([left, top]),
                5 => {
                    if centre_inside() {
                        segments.push([bottom, right]);
                        segments.push([left, top]);
                    } else {
                        segments.push([left, bottom]);
                        segments.push([right, top]);
                    }
                }
                10 => {
                    if centre_inside() {
                        segments.push([left, bottom]);
                        segments.push([right, top]);
                    } else {
                        segments.push([bottom, right]);
                        segments.push([left, top]);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    let crossing = |e: usize| {
        let ((i0, j0), (i1, j1)) = ids.endpoints(e);
        let (a, b) = (f.value(i0, j0), f.value(i1, j1));
        let t = (level - a) / (b - a);
        let p0 = f.cell_center(i0, j0);
        let p1 = f.cell_center(i1, j1);
        [p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])]
    };

    // Each lattice edge is shared by at most two segments.
    const NO: u32 = u32::MAX;
    let mut at_edge = vec![[NO; 2]; ids.count()];
    for (s, seg) in segments.iter().enumerate() {
        for &e in seg {
            let slot = &mut at_edge[e];
            if slot[0] == NO {
                slot[0] = s as u32;
            } else {
                slot[1] = s as u32;
            }
        }
    }
    let other_segment = |e: usize, s: u32| {
        let slot = at_edge[e];
        if slot[0] == s {
            slot[1]
        } else {
            slot[0]
        }
    };

    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let mut trace = |start_seg: usize, start_edge: usize, used: &mut Vec<bool>| {
        let mut edges = vec![start_edge];
        let (mut seg, mut edge) = (start_seg as u32, start_edge);
        loop {
            used[seg as usize] = true;
            let s = segments[seg as usize];
            edge = if s[0] == edge { s[1] } else { s[0] };
            edges.push(edge);
            let next = other_segment(edge, seg);
            if next == NO || used[next as usize] {
                break;
            }
            seg = next;
        }
        let closed = edges.len() > 2 && edges.first() == edges.last();
        if closed {
            edges.pop();
        }
        out.push(Polyline { points: edges.into_iter().map(crossing).collect(), closed });
    };

    // open chains start at an edge touched by a single segment
    for s in 0..segments.len() {
        if used[s] {
            continue;
        }
        for &e in &segments[s] {
            if other_segment(e, s as u32) == NO {
                trace(s, e, &mut used);
                break;
            }
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            trace(s, segments[s][0], &mut used);
        }
    }
    out
}
