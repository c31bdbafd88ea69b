//! Edge decomposition into fixed points of degree peeling.
//!
//! Repeat until no edges remain: compute coreness of the residual graph,
//! take `k` = its maximum, cut the residual `k`-core out as a layer of value
//! `k`. Every residual vertex left afterwards has residual coreness below
//! `k`, so layer values strictly decrease and there are exactly `L` coreness
//! passes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph, VertexId};
use crate::peel::{coreness, Adjacency, PeelMap};

/// One fixed point: every vertex has internal degree `>= value` and the
/// `(value + 1)`-core of the layer is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub value: u32,
    /// `(u, v)` with `u < v`, in canonical order.
    pub edges: Vec<(VertexId, VertexId)>,
    /// Sorted dense ids incident to `edges`.
    pub vertices: Vec<VertexId>,
}

impl Layer {
    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn subgraph(&self) -> Subgraph {
        Subgraph::from_edges(&self.edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    /// Strictly decreasing `value`.
    pub layers: Vec<Layer>,
    /// Layer value per edge, in canonical edge order.
    pub edge_layer: Vec<u32>,
    /// Per dense vertex, the values of the layers it has edges in, descending.
    pub clone_map: Vec<Vec<u32>>,
}

impl Decomposition {
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Highest peel value (the graph's degeneracy); 0 when edgeless.
    pub fn k_max(&self) -> u32 {
        self.layers.first().map_or(0, |l| l.value)
    }

    pub fn values(&self) -> impl Iterator<Item = u32> + '_ {
        self.layers.iter().map(|l| l.value)
    }

    pub fn layer(&self, value: u32) -> Result<&Layer> {
        // values are strictly decreasing
        self.layers
            .binary_search_by(|l| value.cmp(&l.value))
            .map(|i| &self.layers[i])
            .map_err(|_| Error::UnknownLayer(value))
    }

    pub fn multiplicity(&self, v: VertexId) -> usize {
        self.clone_map.get(v as usize).map_or(0, Vec::len)
    }

    /// Rebuilds layers and clone map from a per-edge layer assignment.
    pub fn from_edge_layers(g: &Graph, edge_layer: Vec<u32>) -> Result<Self> {
        if edge_layer.len() != g.m() {
            return Err(Error::InvalidArgument(alloc::format!(
                "{} edge layer entries for {} edges",
                edge_layer.len(),
                g.m()
            )));
        }
        let mut by_value: BTreeMap<u32, Vec<(VertexId, VertexId)>> = BTreeMap::new();
        for (e, &k) in g.edges().zip(&edge_layer) {
            if k == 0 {
                return Err(Error::InvalidArgument("edge assigned to layer 0".into()));
            }
            by_value.entry(k).or_default().push(e);
        }
        let layers = by_value
            .into_iter()
            .rev()
            .map(|(value, edges)| Layer { value, vertices: incident_vertices(&edges), edges })
            .collect();
        Ok(Self::assemble(g.n(), layers, edge_layer))
    }

    fn assemble(n: usize, layers: Vec<Layer>, edge_layer: Vec<u32>) -> Self {
        let mut clone_map = vec![Vec::new(); n];
        for layer in &layers {
            for &v in &layer.vertices {
                clone_map[v as usize].push(layer.value);
            }
        }
        Decomposition { layers, edge_layer, clone_map }
    }
}

fn incident_vertices(edges: &[(VertexId, VertexId)]) -> Vec<VertexId> {
    let mut vs: Vec<VertexId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Layer values containing `v`, descending.
pub fn clones_of(d: &Decomposition, v: VertexId) -> Result<&[u32]> {
    d.clone_map
        .get(v as usize)
        .map(Vec::as_slice)
        .ok_or(Error::VertexOutOfRange { vertex: v, n: d.clone_map.len() })
}

pub fn decompose(g: &Graph) -> Decomposition {
    decompose_by(g, |r| coreness(r))
}

/// Same result as [`decompose`]; each residual coreness pass runs on
/// `workers` threads.
#[cfg(feature = "std")]
pub fn decompose_with_workers(g: &Graph, workers: usize) -> Decomposition {
    if workers <= 1 {
        return decompose(g);
    }
    decompose_by(g, |r| crate::peel::coreness_parallel(r, workers))
}

/// Residual graph: a private copy of the adjacency in which each vertex keeps
/// its surviving neighbours as a sorted prefix of its slot range.
struct Residual<'g> {
    offsets: &'g [usize],
    adjacency: Vec<VertexId>,
    live: Vec<u32>,
}

impl Adjacency for Residual<'_> {
    fn vertex_count(&self) -> usize {
        self.live.len()
    }

    #[inline]
    fn neighbor_slice(&self, v: usize) -> &[VertexId] {
        let start = self.offsets[v];
        &self.adjacency[start..start + self.live[v] as usize]
    }
}

fn decompose_by(g: &Graph, mut core_of: impl FnMut(&Residual<'_>) -> PeelMap) -> Decomposition {
    let n = g.n();
    let mut residual = Residual {
        offsets: g.offsets(),
        adjacency: g.adjacency().to_vec(),
        live: (0..n).map(|v| g.degree_of(v) as u32).collect(),
    };
    let indexer = g.edge_indexer();
    let mut edge_layer = vec![0u32; g.m()];
    let mut remaining = g.m();
    let mut layers = Vec::new();

    while remaining > 0 {
        let peel = core_of(&residual);
        let k = peel.degeneracy();
        let core = &peel.core;
        let vertices: Vec<VertexId> = (0..n as VertexId).filter(|&v| core[v as usize] == k).collect();

        let mut edges = Vec::new();
        for &v in &vertices {
            for &w in residual.neighbor_slice(v as usize) {
                if w > v && core[w as usize] == k {
                    edges.push((v, w));
                    edge_layer[indexer.index(v, w).expect("residual edge exists in graph")] = k;
                }
            }
        }
        // Only k-core vertices lose edges.
        for &v in &vertices {
            let start = residual.offsets[v as usize];
            let len = residual.live[v as usize] as usize;
            let slots = &mut residual.adjacency[start..start + len];
            let mut kept = 0;
            for i in 0..len {
                let w = slots[i];
                if core[w as usize] != k {
                    slots[kept] = w;
                    kept += 1;
                }
            }
            residual.live[v as usize] = kept as u32;
        }

        remaining -= edges.len();
        layers.push(Layer { value: k, edges, vertices });
    }

    Decomposition::assemble(n, layers, edge_layer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_with_tail() -> Graph {
        Graph::from_dense_edges(7, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn k4_tail_layers() {
        let d = decompose(&k4_with_tail());
        assert_eq!(d.values().collect::<Vec<_>>(), vec![3, 1]);
        assert_eq!(d.layers[0].edges, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(d.layers[1].edges, vec![(4, 5), (5, 6)]);
        assert_eq!(d.layers[1].vertices, vec![4, 5, 6]);
        assert_eq!(clones_of(&d, 4).unwrap(), &[3, 1]);
        assert_eq!(clones_of(&d, 5).unwrap(), &[1]);
        assert_eq!(clones_of(&d, 0).unwrap(), &[] as &[u32]);
        assert_eq!(d.k_max(), 3);
        assert_eq!(d.edge_layer, vec![3, 3, 3, 3, 3, 3, 1, 1]);
    }

    #[test]
    fn complete_graph_single_layer() {
        let g = Graph::from_dense_edges(5, (0..5u32).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        let d = decompose(&g);
        assert_eq!(d.layer_count(), 1);
        assert_eq!(d.layers[0].value, 4);
        assert_eq!(d.layers[0].edges.len(), 10);
        assert!((0..5).all(|v| clones_of(&d, v).unwrap() == [4]));
    }

    #[test]
    fn edgeless_graph() {
        let d = decompose(&Graph::from_dense_edges(3, []).unwrap());
        assert_eq!(d.layer_count(), 0);
        assert_eq!(d.k_max(), 0);
    }

    #[test]
    fn clones_of_out_of_range() {
        let d = decompose(&k4_with_tail());
        assert!(matches!(clones_of(&d, 7), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn unknown_layer_lookup() {
        let d = decompose(&k4_with_tail());
        assert_eq!(d.layer(3).unwrap().value, 3);
        assert_eq!(d.layer(2), Err(Error::UnknownLayer(2)));
    }

    #[test]
    fn rebuild_from_edge_layers() {
        let g = k4_with_tail();
        let d = decompose(&g);
        assert_eq!(Decomposition::from_edge_layers(&g, d.edge_layer.clone()).unwrap(), d);
    }

    #[cfg(feature = "std")]
    #[test]
    fn workers_do_not_change_result() {
        let g = k4_with_tail();
        assert_eq!(decompose_with_workers(&g, 4), decompose(&g));
    }
}
