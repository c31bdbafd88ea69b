//! Coreness (vertex peel values).

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::VertexId;

/// Read-only sorted adjacency over dense ids `0..vertex_count()`.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn neighbor_slice(&self, v: usize) -> &[VertexId];

    fn degree_of(&self, v: usize) -> usize {
        self.neighbor_slice(v).len()
    }
}

/// Per-vertex coreness.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeelMap {
    pub core: Vec<u32>,
}

impl PeelMap {
    pub fn get(&self, v: VertexId) -> Option<u32> {
        self.core.get(v as usize).copied()
    }

    /// Maximum coreness; 0 for an empty or edgeless graph.
    pub fn degeneracy(&self) -> u32 {
        self.core.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }
}

/// Bucket-based minimum-degree peeling (Batagelj–Zaversnik), O(n + m).
pub fn coreness<A: Adjacency + ?Sized>(g: &A) -> PeelMap {
    let n = g.vertex_count();
    if n == 0 {
        return PeelMap::default();
    }
    let mut deg: Vec<u32> = (0..n).map(|v| g.degree_of(v) as u32).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as usize;

    // bin[d] = start of the degree-d block in `vert`
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d as usize] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0 as VertexId; n];
    for v in 0..n {
        let d = deg[v] as usize;
        pos[v] = bin[d];
        vert[bin[d]] = v as VertexId;
        bin[d] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i] as usize;
        let dv = deg[v];
        for &u in g.neighbor_slice(v) {
            let u = u as usize;
            let du = deg[u];
            if du > dv {
                let pu = pos[u];
                let pw = bin[du as usize];
                let w = vert[pw] as usize;
                if u != w {
                    pos[u] = pw;
                    pos[w] = pu;
                    vert[pu] = w as VertexId;
                    vert[pw] = u as VertexId;
                }
                bin[du as usize] += 1;
                deg[u] = du - 1;
            }
        }
    }
    PeelMap { core: deg }
}

/// Level-synchronous multithreaded peeling.
///
/// Each level `k` runs a scan phase (every worker collects its vertices of
/// current degree `k`) and a processing phase (workers peel their frontier,
/// decrementing neighbour degrees atomically and adopting any neighbour that
/// drops to exactly `k`). Coreness is unique, so the result equals
/// [`coreness`] regardless of scheduling.
#[cfg(feature = "std")]
pub fn coreness_parallel<A: Adjacency + Sync + ?Sized>(g: &A, workers: usize) -> PeelMap {
    use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};
    use std::sync::Barrier;

    let n = g.vertex_count();
    if n == 0 {
        return PeelMap::default();
    }
    let workers = workers.clamp(1, n);
    let deg: Vec<AtomicU32> = (0..n).map(|v| AtomicU32::new(g.degree_of(v) as u32)).collect();
    let visited = AtomicUsize::new(0);
    let barrier = Barrier::new(workers);
    let chunk = n.div_ceil(workers);

    let run = |worker: usize| {
        let range = (worker * chunk).min(n)..((worker + 1) * chunk).min(n);
        let mut frontier: Vec<VertexId> = Vec::new();
        let mut level = 0u32;
        loop {
            frontier.clear();
            for v in range.clone() {
                if deg[v].load(Ordering::Relaxed) == level {
                    frontier.push(v as VertexId);
                }
            }
            barrier.wait();

            let mut i = 0;
            while i < frontier.len() {
                let v = frontier[i] as usize;
                i += 1;
                for &u in g.neighbor_slice(v) {
                    let du = &deg[u as usize];
                    if du.load(Ordering::Relaxed) > level {
                        let before = du.fetch_sub(1, Ordering::Relaxed);
                        if before == level + 1 {
                            frontier.push(u);
                        } else if before <= level {
                            du.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                }
            }
            visited.fetch_add(frontier.len(), Ordering::Relaxed);
            barrier.wait();
            if visited.load(Ordering::Relaxed) >= n {
                break;
            }
            // Nobody touches `visited` again before the next scan barrier.
            level += 1;
        }
    };

    if workers == 1 {
        run(0);
    } else {
        std::thread::scope(|s| {
            for w in 1..workers {
                let run = &run;
                s.spawn(move || run(w));
            }
            run(0);
        });
    }
    PeelMap { core: deg.into_iter().map(AtomicU32::into_inner).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn complete(n: u32) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_dense_edges(n as usize, edges).unwrap()
    }

    fn cycle(n: u32) -> Graph {
        Graph::from_dense_edges(n as usize, (0..n).map(|u| (u, (u + 1) % n))).unwrap()
    }

    // K4 on {1,2,3,4} plus path 4–5–6; vertex 0 isolated.
    fn k4_with_tail() -> Graph {
        Graph::from_dense_edges(7, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn complete_graph() {
        assert_eq!(coreness(&complete(5)).core, vec![4; 5]);
    }

    #[test]
    fn cycle_graph() {
        assert_eq!(coreness(&cycle(6)).core, vec![2; 6]);
    }

    #[test]
    fn k4_tail_matches_hand_peeling() {
        let p = coreness(&k4_with_tail());
        assert_eq!(p.core, vec![0, 3, 3, 3, 3, 1, 1]);
        assert_eq!(p.degeneracy(), 3);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::from_dense_edges(0, []).unwrap();
        assert!(coreness(&g).is_empty());
        assert_eq!(coreness(&g).degeneracy(), 0);
    }

    #[cfg(feature = "std")]
    #[test]
    fn parallel_matches_sequential() {
        for g in [complete(5), cycle(6), k4_with_tail()] {
            let seq = coreness(&g);
            for w in [1, 2, 4, 8] {
                assert_eq!(coreness_parallel(&g, w), seq);
            }
        }
    }
}
