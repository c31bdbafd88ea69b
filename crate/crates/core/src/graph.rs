//! Immutable simple undirected graphs in compressed adjacency form.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::peel::Adjacency;

/// Dense vertex id, `0..n`.
pub type VertexId = u32;

/// Vertex id as it appeared in the input.
///
/// Integer tokens become `Num`, anything else `Token`. All numeric ids order
/// before all tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExternalId {
    Num(u64),
    Token(String),
}

impl ExternalId {
    /// Plain decimal digits that fit in a `u64` are numeric.
    pub fn parse(token: &str) -> Self {
        match token.bytes().all(|b| b.is_ascii_digit()).then(|| token.parse::<u64>()) {
            Some(Ok(n)) => ExternalId::Num(n),
            _ => ExternalId::Token(token.into()),
        }
    }
}

impl fmt::Display for ExternalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExternalId::Num(n) => write!(f, "{n}"),
            ExternalId::Token(t) => f.write_str(t),
        }
    }
}

/// Simple undirected graph.
///
/// Invariants: every adjacency list is sorted ascending with no duplicates
/// and no self-references, `u ∈ adj(v) ⇔ v ∈ adj(u)`, and
/// `offsets[n] == 2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<VertexId>,
    external_ids: Vec<ExternalId>,
    labels: Option<Vec<Option<String>>>,
}

impl Graph {
    /// Builds a graph over dense ids `0..external_ids.len()`.
    ///
    /// Self-loops are dropped and duplicate or reversed edges collapse to one.
    pub fn from_edges(external_ids: Vec<ExternalId>, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let n = external_ids.len();
        let mut canon: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                canon.push((u.min(v), u.max(v)));
            }
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_canonical(external_ids, &canon))
    }

    /// Graph on `n` vertices whose external ids equal their dense ids.
    pub fn from_dense_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        Self::from_edges((0..n as u64).map(ExternalId::Num).collect(), edges)
    }

    // `canon` must be sorted, deduplicated, u < v.
    fn from_canonical(external_ids: Vec<ExternalId>, canon: &[(VertexId, VertexId)]) -> Self {
        let n = external_ids.len();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in canon {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut adjacency = vec![0; 2 * canon.len()];
        // Lexicographic edge order fills each list with its lower neighbours
        // first, then its upper neighbours, both ascending.
        for &(u, v) in canon {
            adjacency[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            adjacency[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        Graph { offsets, adjacency, external_ids, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidArgument(alloc::format!(
                "label table has {} entries, graph has {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.external_ids.len()
    }

    pub fn m(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn adjacency(&self) -> &[VertexId] {
        &self.adjacency
    }

    pub fn external_ids(&self) -> &[ExternalId] {
        &self.external_ids
    }

    pub fn external_id(&self, v: VertexId) -> Option<&ExternalId> {
        self.external_ids.get(v as usize)
    }

    pub fn labels(&self) -> Option<&[Option<String>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref()?.get(v as usize)?.as_deref()
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check(v)?;
        Ok(self.offsets[v as usize + 1] - self.offsets[v as usize])
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId]> {
        self.check(v)?;
        Ok(self.neighbor_slice(v as usize))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.n() && self.neighbor_slice(u as usize).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order. This is the
    /// canonical edge order used for per-edge data.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let adj = self.neighbor_slice(u);
            let start = adj.partition_point(|&w| (w as usize) <= u);
            adj[start..].iter().map(move |&v| (u as VertexId, v))
        })
    }

    // Number of canonical edges whose smaller endpoint is below each vertex.
    fn upper_prefix(&self) -> Vec<usize> {
        let mut prefix = Vec::with_capacity(self.n() + 1);
        let mut acc = 0;
        prefix.push(0);
        for u in 0..self.n() {
            let adj = self.neighbor_slice(u);
            acc += adj.len() - adj.partition_point(|&w| (w as usize) <= u);
            prefix.push(acc);
        }
        prefix
    }

    pub fn edge_indexer(&self) -> EdgeIndexer<'_> {
        EdgeIndexer { graph: self, prefix: self.upper_prefix() }
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.offsets[v as usize + 1] == self.offsets[v as usize]
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    #[inline]
    fn neighbor_slice(&self, v: usize) -> &[VertexId] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Maps an edge to its position in canonical order, in O(log deg).
pub struct EdgeIndexer<'g> {
    graph: &'g Graph,
    prefix: Vec<usize>,
}

impl EdgeIndexer<'_> {
    pub fn index(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let (u, v) = (u.min(v), u.max(v));
        if v as usize >= self.graph.n() {
            return None;
        }
        let adj = self.graph.neighbor_slice(u as usize);
        let pos = adj.binary_search(&v).ok()?;
        let upper_start = adj.partition_point(|&w| w <= u);
        Some(self.prefix[u as usize] + pos - upper_start)
    }
}

/// Incremental builder that assigns dense ids in order of first appearance.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    external_ids: Vec<ExternalId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a new vertex and returns its dense id. The caller is
    /// responsible for not registering the same external id twice.
    pub fn push_vertex(&mut self, id: ExternalId) -> VertexId {
        self.external_ids.push(id);
        (self.external_ids.len() - 1) as VertexId
    }

    pub fn push_edge(&mut self, u: VertexId, v: VertexId) {
        self.edges.push((u, v));
    }

    pub fn vertex_count(&self) -> usize {
        self.external_ids.len()
    }

    pub fn build(self) -> Result<Graph> {
        Graph::from_edges(self.external_ids, self.edges)
    }
}

/// Compressed adjacency over an edge subset, with local ids.
///
/// Local ids follow ascending global id order, so iterating local neighbours
/// ascending is the same as iterating global neighbours ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    vertices: Vec<VertexId>,
    offsets: Vec<usize>,
    adjacency: Vec<VertexId>,
}

impl Subgraph {
    /// `edges` are global-id pairs; duplicates and self-loops are ignored.
    pub fn from_edges(edges: &[(VertexId, VertexId)]) -> Self {
        let mut vertices: Vec<VertexId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let local = |x: VertexId| vertices.binary_search(&x).unwrap() as VertexId;
        let mut canon: Vec<(VertexId, VertexId)> = edges
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (local(u.min(v)), local(u.max(v))))
            .collect();
        canon.sort_unstable();
        canon.dedup();
        let g = Graph::from_canonical(vec![ExternalId::Num(0); vertices.len()], &canon);
        Subgraph { vertices, offsets: g.offsets, adjacency: g.adjacency }
    }

    /// Sorted global ids of the vertices.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn local_id(&self, global: VertexId) -> Option<VertexId> {
        self.vertices.binary_search(&global).ok().map(|i| i as VertexId)
    }

    pub fn global_id(&self, local: VertexId) -> VertexId {
        self.vertices[local as usize]
    }

    pub fn local_degree(&self, local: usize) -> usize {
        self.offsets[local + 1] - self.offsets[local]
    }

    /// Local-id edges `(a, b)`, `a < b`, lexicographic.
    pub fn local_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.len()).flat_map(move |a| {
            self.neighbor_slice(a).iter().filter(move |&&b| b as usize > a).map(move |&b| (a as VertexId, b))
        })
    }
}

impl Adjacency for Subgraph {
    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    fn neighbor_slice(&self, v: usize) -> &[VertexId] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Component labelling over the whole graph or an edge subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Per dense vertex; `None` when the vertex has no incident edge in scope.
    pub labels: Vec<Option<u32>>,
    /// Vertex count per label.
    pub sizes: Vec<usize>,
    /// Edge count per label.
    pub edge_counts: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

/// Labels components `0..c` by decreasing vertex count, ties broken by the
/// smallest external id contained.
pub fn connected_components(g: &Graph, edge_subset: Option<&[(VertexId, VertexId)]>) -> Components {
    let n = g.n();
    let mut dsu = DisjointSets::new(n);
    let mut touched = vec![false; n];
    let mut union = |u: VertexId, v: VertexId| {
        touched[u as usize] = true;
        touched[v as usize] = true;
        dsu.union(u as usize, v as usize);
    };
    match edge_subset {
        Some(edges) => edges.iter().for_each(|&(u, v)| union(u, v)),
        None => g.edges().for_each(|(u, v)| union(u, v)),
    }

    // root -> provisional index
    let mut provisional = vec![u32::MAX; n];
    let mut groups: Vec<(usize, &ExternalId, usize)> = Vec::new(); // (size, min id, edges)
    for v in (0..n).filter(|&v| touched[v]) {
        let r = dsu.find(v);
        if provisional[r] == u32::MAX {
            provisional[r] = groups.len() as u32;
            groups.push((0, &g.external_ids[v], 0));
        }
        let entry = &mut groups[provisional[r] as usize];
        entry.0 += 1;
        if g.external_ids[v] < *entry.1 {
            entry.1 = &g.external_ids[v];
        }
    }
    let mut count_edge = |u: VertexId| {
        let r = dsu.find(u as usize);
        groups[provisional[r] as usize].2 += 1;
    };
    match edge_subset {
        Some(edges) => edges.iter().for_each(|&(u, _)| count_edge(u)),
        None => g.edges().for_each(|(u, _)| count_edge(u)),
    }

    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| groups[b].0.cmp(&groups[a].0).then_with(|| groups[a].1.cmp(groups[b].1)));
    let mut rank = vec![0u32; groups.len()];
    for (label, &p) in order.iter().enumerate() {
        rank[p] = label as u32;
    }
    let labels = (0..n)
        .map(|v| touched[v].then(|| rank[provisional[dsu.find(v)] as usize]))
        .collect();
    Components {
        labels,
        sizes: order.iter().map(|&p| groups[p].0).collect(),
        edge_counts: order.iter().map(|&p| groups[p].2).collect(),
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_dense_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn triangle_counts() {
        let g = triangle();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.offsets()[3], 6);
    }

    #[test]
    fn duplicates_and_self_loops_collapse() {
        let g = Graph::from_dense_edges(4, [(0, 1), (1, 0), (3, 3), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
        assert!(g.is_isolated(3));
    }

    #[test]
    fn neighbors_sorted() {
        assert_eq!(triangle().neighbors(0).unwrap(), &[1, 2]);
        let star = Graph::from_dense_edges(4, [(0, 3), (0, 1), (2, 0)]).unwrap();
        assert_eq!(star.neighbors(0).unwrap(), &[1, 2, 3]);
        let path = Graph::from_dense_edges(3, [(1, 2), (0, 1)]).unwrap();
        assert_eq!(path.neighbors(1).unwrap(), &[0, 2]);
    }

    #[test]
    fn neighbors_out_of_range() {
        assert_eq!(triangle().neighbors(3), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
    }

    #[test]
    fn edge_index_matches_canonical_order() {
        let g = Graph::from_dense_edges(5, [(3, 4), (0, 4), (1, 2), (0, 1), (2, 4)]).unwrap();
        let indexer = g.edge_indexer();
        for (i, (u, v)) in g.edges().enumerate() {
            assert_eq!(indexer.index(v, u), Some(i));
            assert_eq!(indexer.index(u, v), Some(i));
        }
        assert_eq!(indexer.index(0, 2), None);
    }

    #[test]
    fn components_triangle_plus_edge() {
        let g = Graph::from_dense_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let c = connected_components(&g, None);
        assert_eq!(c.sizes, vec![3, 2]);
        assert_eq!(c.edge_counts, vec![3, 1]);
        assert_eq!(c.labels, vec![Some(0), Some(0), Some(0), Some(1), Some(1), None]);
    }

    #[test]
    fn components_empty_subset() {
        let c = connected_components(&triangle(), Some(&[]));
        assert_eq!(c.count(), 0);
        assert!(c.labels.iter().all(Option::is_none));
    }

    #[test]
    fn component_ties_use_smallest_external_id() {
        let ids = vec![ExternalId::Num(9), ExternalId::Num(8), ExternalId::Num(1), ExternalId::Num(2)];
        let g = Graph::from_edges(ids, [(0, 1), (2, 3)]).unwrap();
        let c = connected_components(&g, None);
        assert_eq!(c.labels, vec![Some(1), Some(1), Some(0), Some(0)]);
    }

    #[test]
    fn external_id_ordering() {
        assert!(ExternalId::parse("10") > ExternalId::parse("9"));
        assert!(ExternalId::parse("999") < ExternalId::parse("apple"));
        assert_eq!(ExternalId::parse("word").to_string(), "word");
        assert_eq!(ExternalId::parse("+5"), ExternalId::Token("+5".into()));
    }

    #[test]
    fn subgraph_local_ids_preserve_order() {
        let s = Subgraph::from_edges(&[(7, 3), (3, 9), (9, 7)]);
        assert_eq!(s.vertices(), &[3, 7, 9]);
        assert_eq!(s.neighbor_slice(0), &[1, 2]);
        assert_eq!(s.local_id(9), Some(2));
        assert_eq!(s.edge_count(), 3);
    }
}
