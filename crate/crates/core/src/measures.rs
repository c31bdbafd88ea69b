//! Per-layer structural measures for the ribbon summary.

use alloc::vec::Vec;

use crate::decompose::Decomposition;
use crate::error::Result;
use crate::graph::{connected_components, Graph, Subgraph};
use crate::peel::Adjacency;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LayerMeasures {
    pub value: u32,
    pub vertex_count: usize,
    pub edge_count: usize,
    /// Layer vertices that appear in at least two layers.
    pub clone_count: usize,
    pub component_count: usize,
    /// Mean local clustering coefficient over layer vertices.
    pub clustering: f64,
    /// Global transitivity, `3·triangles / connected triples`.
    pub transitivity: f64,
    /// `(vertices, edges)` of the largest component.
    pub largest_component: (usize, usize),
    /// Edges missing for the layer to be complete; present iff the layer is
    /// connected.
    pub clique_deficit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RibbonSummary {
    pub n: usize,
    pub m: usize,
    pub layer_count: usize,
    pub k_max: u32,
    /// Ordered by decreasing layer value.
    pub rows: Vec<LayerMeasures>,
}

pub fn layer_measures(d: &Decomposition, g: &Graph, k: u32) -> Result<LayerMeasures> {
    let layer = d.layer(k)?;
    let components = connected_components(g, Some(&layer.edges));
    let sub = layer.subgraph();
    let (clustering, transitivity) = clustering_coefficients(&sub);
    let vertex_count = layer.vertices.len() as u64;
    let edge_count = layer.edges.len() as u64;
    Ok(LayerMeasures {
        value: k,
        vertex_count: layer.vertices.len(),
        edge_count: layer.edges.len(),
        clone_count: layer.vertices.iter().filter(|&&v| d.multiplicity(v) >= 2).count(),
        component_count: components.count(),
        clustering,
        transitivity,
        largest_component: components
            .sizes
            .first()
            .map_or((0, 0), |&s| (s, components.edge_counts[0])),
        clique_deficit: (components.count() == 1)
            .then(|| vertex_count * (vertex_count - 1) / 2 - edge_count),
    })
}

pub fn ribbon_summary(d: &Decomposition, g: &Graph) -> RibbonSummary {
    let rows = d
        .values()
        .map(|k| layer_measures(d, g, k).expect("value taken from the decomposition"))
        .collect();
    RibbonSummary { n: g.n(), m: g.m(), layer_count: d.layer_count(), k_max: d.k_max(), rows }
}

/// `(average local clustering, transitivity)`. Vertices of degree < 2
/// contribute 0 to the average.
pub fn clustering_coefficients(sub: &Subgraph) -> (f64, f64) {
    let n = sub.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mut local = Vec::with_capacity(n);
    let mut closed = 0u64; // Σ_v triangles through v
    let mut triples = 0u64; // Σ_v C(deg v, 2)
    for v in 0..n {
        let nv = sub.neighbor_slice(v);
        let d = nv.len() as u64;
        if d < 2 {
            continue;
        }
        // each triangle through v is seen from both of its other corners
        let twice: u64 = nv.iter().map(|&u| sorted_intersection(nv, sub.neighbor_slice(u as usize))).sum();
        let t = twice / 2;
        let pairs = d * (d - 1) / 2;
        local.push(t as f64 / pairs as f64);
        closed += t;
        triples += pairs;
    }
    // summing in sorted order keeps the result independent of vertex numbering
    local.sort_unstable_by(f64::total_cmp);
    let local_sum: f64 = local.iter().sum();
    let transitivity = if triples == 0 { 0.0 } else { closed as f64 / triples as f64 };
    (local_sum / n as f64, transitivity)
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
