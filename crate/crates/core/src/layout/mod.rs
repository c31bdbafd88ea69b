//! Deterministic force-directed layout with Barnes-Hut repulsion, and the
//! stacked 3D overview derived from it.
//!
//! Forces follow Fruchterman–Reingold: a pair at distance `d` repels with
//! `repulsion · L² / d` and each edge attracts with `spring · d² / L`, where
//! `L` is the natural spring length. With unit constants an isolated edge
//! settles at exactly `L`. Displacement per iteration is capped by a
//! temperature that starts at `0.1 · L · √n` and is multiplied by `cooling`
//! after every step.

mod quadtree;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decompose::{Decomposition, Layer};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::peel::Adjacency;
use quadtree::QuadTree;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayoutParams {
    pub iterations: u32,
    /// Barnes-Hut opening angle.
    pub theta: f64,
    pub repulsion: f64,
    pub spring: f64,
    pub natural_length: f64,
    pub cooling: f64,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            iterations: 500,
            theta: 0.5,
            repulsion: 1.0,
            spring: 1.0,
            natural_length: 1.0,
            cooling: 0.99,
            seed: 0x5eed_1a7e,
        }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidArgument(alloc::format!("layout parameter {what}")));
        if self.iterations == 0 {
            return bad("iterations must be >= 1");
        }
        if !(self.theta > 0.0 && self.theta <= 1.2) {
            return bad("theta must be in (0, 1.2]");
        }
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return bad("cooling must be in (0, 1]");
        }
        for (name, x) in [("repulsion", self.repulsion), ("spring", self.spring), ("natural_length", self.natural_length)] {
            if !(x.is_finite() && x > 0.0) {
                return bad(name);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LayoutScope {
    Global,
    Layer(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult {
    pub scope: LayoutScope,
    /// Dense ids, ascending; `positions[i]` belongs to `vertices[i]`.
    pub vertices: Vec<VertexId>,
    pub positions: Vec<[f64; 2]>,
    pub params: LayoutParams,
}

impl LayoutResult {
    pub fn position_of(&self, v: VertexId) -> Option<[f64; 2]> {
        self.vertices.binary_search(&v).ok().map(|i| self.positions[i])
    }
}

/// Layout of a whole graph (isolated vertices included).
pub fn layout(g: &Graph, p: &LayoutParams) -> Result<LayoutResult> {
    Ok(LayoutResult {
        scope: LayoutScope::Global,
        vertices: (0..g.n() as VertexId).collect(),
        positions: simulate(g, p, 1)?,
        params: *p,
    })
}

/// Independent layout of one layer, using only the layer's edges.
pub fn layout_layer(layer: &Layer, p: &LayoutParams) -> Result<LayoutResult> {
    let sub = layer.subgraph();
    Ok(LayoutResult {
        scope: LayoutScope::Layer(layer.value),
        vertices: sub.vertices().to_vec(),
        positions: simulate(&sub, p, 1)?,
        params: *p,
    })
}

#[cfg(feature = "std")]
pub fn layout_with_workers(g: &Graph, p: &LayoutParams, workers: usize) -> Result<LayoutResult> {
    Ok(LayoutResult {
        scope: LayoutScope::Global,
        vertices: (0..g.n() as VertexId).collect(),
        positions: simulate(g, p, workers)?,
        params: *p,
    })
}

#[cfg(feature = "std")]
pub fn layout_layer_with_workers(layer: &Layer, p: &LayoutParams, workers: usize) -> Result<LayoutResult> {
    let sub = layer.subgraph();
    Ok(LayoutResult {
        scope: LayoutScope::Layer(layer.value),
        vertices: sub.vertices().to_vec(),
        positions: simulate(&sub, p, workers)?,
        params: *p,
    })
}

/// Runs the simulation over any adjacency. Every vertex's displacement is
/// computed from the previous iteration's positions alone, in a fixed
/// order, so the result does not depend on `workers`.
pub fn simulate<A: Adjacency + Sync + ?Sized>(g: &A, p: &LayoutParams, workers: usize) -> Result<Vec<[f64; 2]>> {
    p.validate()?;
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::InvalidArgument("layout of an empty vertex set".into()));
    }
    let mut positions = initial_positions(n, p);
    let mut disp = vec![[0.0f64; 2]; n];
    let mut temperature = 0.1 * p.natural_length * libm::sqrt(n as f64);

    for _ in 0..p.iterations {
        let tree = QuadTree::build(&positions);
        let step = Step { g, p, positions: &positions, tree: &tree, temperature };
        run_step(&step, &mut disp, workers);
        for (pos, d) in positions.iter_mut().zip(&disp) {
            pos[0] += d[0];
            pos[1] += d[1];
        }
        temperature *= p.cooling;
    }
    Ok(positions)
}

/// Uniform on a disk of radius `L · √n`.
fn initial_positions(n: usize, p: &LayoutParams) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let radius = p.natural_length * libm::sqrt(n as f64);
    (0..n)
        .map(|_| {
            let r = radius * libm::sqrt(rng.random::<f64>());
            let a = 2.0 * PI * rng.random::<f64>();
            [r * libm::cos(a), r * libm::sin(a)]
        })
        .collect()
}

struct Step<'a, A: ?Sized> {
    g: &'a A,
    p: &'a LayoutParams,
    positions: &'a [[f64; 2]],
    tree: &'a QuadTree,
    temperature: f64,
}

impl<A: Adjacency + ?Sized> Step<'_, A> {
    fn displacement(&self, i: usize) -> [f64; 2] {
        let (p, pos) = (self.p, self.positions);
        let len = p.natural_length;
        let k_rep = p.repulsion * len * len;
        let mut f = self.tree.accumulate(pos, i, p.theta, |dx, dy, mass, j| {
            let d2 = dx * dx + dy * dy;
            if d2 > 1e-18 {
                // (dx, dy)/d · k/d
                [k_rep * mass * dx / d2, k_rep * mass * dy / d2]
            } else {
                // coincident: push apart along a direction fixed by the pair
                let a = coincident_angle(i, j);
                let s = k_rep * mass / 1e-9;
                [s * libm::cos(a), s * libm::sin(a)]
            }
        });
        for &j in self.g.neighbor_slice(i) {
            let q = pos[j as usize];
            let (dx, dy) = (q[0] - pos[i][0], q[1] - pos[i][1]);
            let d = libm::sqrt(dx * dx + dy * dy);
            // direction · spring·d²/L
            let s = p.spring * d / len;
            f[0] += s * dx;
            f[1] += s * dy;
        }
        let mag = libm::sqrt(f[0] * f[0] + f[1] * f[1]);
        if !mag.is_finite() || mag == 0.0 {
            return [0.0, 0.0];
        }
        let scale = mag.min(self.temperature) / mag;
        [f[0] * scale, f[1] * scale]
    }
}

fn coincident_angle(i: usize, j: usize) -> f64 {
    // antisymmetric in (i, j) so the pair separates
    let (lo, hi, sign) = if i < j { (i, j, 0.0) } else { (j, i, PI) };
    let h = (lo as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (hi as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
    (h >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * PI + sign
}

#[cfg(feature = "std")]
fn run_step<A: Adjacency + Sync + ?Sized>(step: &Step<'_, A>, disp: &mut [[f64; 2]], workers: usize) {
    let n = disp.len();
    let workers = workers.clamp(1, n);
    if workers == 1 {
        for (i, d) in disp.iter_mut().enumerate() {
            *d = step.displacement(i);
        }
        return;
    }
    let chunk = n.div_ceil(workers);
    std::thread::scope(|s| {
        for (c, part) in disp.chunks_mut(chunk).enumerate() {
            s.spawn(move || {
                for (k, d) in part.iter_mut().enumerate() {
                    *d = step.displacement(c * chunk + k);
                }
            });
        }
    });
}

#[cfg(not(feature = "std"))]
fn run_step<A: Adjacency + ?Sized>(step: &Step<'_, A>, disp: &mut [[f64; 2]], _workers: usize) {
    for (i, d) in disp.iter_mut().enumerate() {
        *d = step.displacement(i);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OverviewPoint {
    pub vertex: VertexId,
    pub layer: u32,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// One point per (vertex, layer) membership; clones of a vertex share
/// `(x, y)` and differ in `z`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OverviewCoordinates {
    pub height_scale: f64,
    pub spread_scale: f64,
    pub points: Vec<OverviewPoint>,
}

/// Points are emitted layer by layer (decreasing value), vertices ascending.
pub fn overview_coordinates(
    d: &Decomposition,
    global: &LayoutResult,
    height_scale: f64,
    spread_scale: f64,
) -> Result<OverviewCoordinates> {
    let mut points = Vec::new();
    for layer in &d.layers {
        let z = layer.value as f64 * height_scale;
        for &v in &layer.vertices {
            let [x, y] = global
                .position_of(v)
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("layout has no position for vertex {v}")))?;
            points.push(OverviewPoint { vertex: v, layer: layer.value, x: x * spread_scale, y: y * spread_scale, z });
        }
    }
    Ok(OverviewCoordinates { height_scale, spread_scale, points })
}
