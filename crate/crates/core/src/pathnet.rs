//! Shortest paths and shortest-path-nets inside one layer.
//!
//! Breadth-first search runs level by level with each frontier sorted
//! ascending and neighbours expanded ascending, so every vertex's recorded
//! predecessor is its lowest-id neighbour on the previous level. This makes
//! paths fully deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::decompose::Layer;
use crate::error::{Error, Result};
use crate::graph::{Subgraph, VertexId};
use crate::peel::Adjacency;

const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathNet {
    pub layer: u32,
    /// Dense ids in insertion order.
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub anchors: Vec<VertexId>,
}

impl PathNet {
    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Shortest path between the first two anchors, then one expansion per
    /// further anchor, in order. `hop_cap` bounds each expansion.
    pub fn grow(layer: &Layer, anchors: &[VertexId], hop_cap: Option<u32>) -> Result<PathNet> {
        let [first, second, rest @ ..] = anchors else {
            return Err(Error::InvalidArgument("a path-net needs at least two anchors".into()));
        };
        let sub = layer.subgraph();
        let path = shortest_path_in(&sub, layer.value, *first, *second)?;
        let mut net = PathNet { layer: layer.value, vertices: Vec::new(), edges: Vec::new(), anchors: vec![*first, *second] };
        net.merge_path(&path);
        for &w in rest {
            net = expand_net_in(&net, &sub, w, hop_cap)?;
        }
        Ok(net)
    }

    fn merge_path(&mut self, path: &[VertexId]) {
        for &v in path {
            if !self.contains(v) {
                self.vertices.push(v);
            }
        }
        for pair in path.windows(2) {
            self.edges.push((pair[0], pair[1]));
        }
    }
}

pub fn shortest_path(layer: &Layer, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
    shortest_path_in(&layer.subgraph(), layer.value, u, v)
}

/// Attaches `w` to the net by a minimum-hop path ending at the first net
/// vertex the search reaches. `w` already on the net is a no-op.
pub fn expand_net(net: &PathNet, layer: &Layer, w: VertexId, hop_cap: Option<u32>) -> Result<PathNet> {
    expand_net_in(net, &layer.subgraph(), w, hop_cap)
}

pub fn shortest_path_in(sub: &Subgraph, layer: u32, u: VertexId, v: VertexId) -> Result<Vec<VertexId>> {
    let lu = sub.local_id(u).ok_or(Error::NotInLayer { vertex: u, layer })?;
    let lv = sub.local_id(v).ok_or(Error::NotInLayer { vertex: v, layer })?;
    let mut target = vec![false; sub.len()];
    target[lv as usize] = true;
    let (hit, pred) = bfs_to_targets(sub, lu, &target, None).ok_or(Error::NoPath { from: u, to: v })?;
    let mut path = unwind(&pred, lu, hit);
    path.reverse();
    Ok(path.into_iter().map(|l| sub.global_id(l)).collect())
}

pub fn expand_net_in(net: &PathNet, sub: &Subgraph, w: VertexId, hop_cap: Option<u32>) -> Result<PathNet> {
    let lw = sub.local_id(w).ok_or(Error::NotInLayer { vertex: w, layer: net.layer })?;
    if net.contains(w) {
        return Ok(net.clone());
    }
    if net.vertices.is_empty() {
        return Err(Error::InvalidArgument("cannot expand an empty path-net".into()));
    }
    let mut target = vec![false; sub.len()];
    for &t in &net.vertices {
        let lt = sub.local_id(t).ok_or(Error::NotInLayer { vertex: t, layer: net.layer })?;
        target[lt as usize] = true;
    }
    let (hit, pred) =
        bfs_to_targets(sub, lw, &target, hop_cap).ok_or(Error::NoPath { from: w, to: net.vertices[0] })?;
    // unwind gives hit..=w; reversed it runs from w to the net
    let mut path = unwind(&pred, lw, hit);
    path.reverse();
    let path: Vec<VertexId> = path.into_iter().map(|l| sub.global_id(l)).collect();

    let mut grown = net.clone();
    grown.merge_path(&path);
    grown.anchors.push(w);
    Ok(grown)
}

/// Level-synchronous BFS from `source`; returns the first target reached and
/// the predecessor array.
fn bfs_to_targets(sub: &Subgraph, source: VertexId, target: &[bool], hop_cap: Option<u32>) -> Option<(VertexId, Vec<u32>)> {
    let mut pred = vec![UNSEEN; sub.len()];
    pred[source as usize] = source;
    if target[source as usize] {
        return Some((source, pred));
    }
    let mut frontier = vec![source];
    let mut next = Vec::new();
    let mut depth = 0u32;
    while !frontier.is_empty() {
        if hop_cap.is_some_and(|cap| depth >= cap) {
            return None;
        }
        depth += 1;
        next.clear();
        for &x in &frontier {
            for &y in sub.neighbor_slice(x as usize) {
                if pred[y as usize] == UNSEEN {
                    pred[y as usize] = x;
                    if target[y as usize] {
                        return Some((y, pred));
                    }
                    next.push(y);
                }
            }
        }
        next.sort_unstable();
        core::mem::swap(&mut frontier, &mut next);
    }
    None
}

// Path from `end` back to `source`.
fn unwind(pred: &[u32], source: VertexId, end: VertexId) -> Vec<VertexId> {
    let mut path = vec![end];
    let mut x = end;
    while x != source {
        x = pred[x as usize];
        path.push(x);
    }
    path
}
