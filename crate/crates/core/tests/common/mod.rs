//! Brute-force oracles and seeded graph generators shared by the test
//! suites. Nothing here calls into the code under test except to read a
//! `Graph`'s edge list.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use peelgraph_core::Graph;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Edges = Vec<(u32, u32)>;

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Edges {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Preferential attachment: each new vertex links to `k` distinct earlier
/// vertices chosen proportionally to degree.
pub fn barabasi_albert(n: usize, k: usize, seed: u64) -> Edges {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut endpoints: Vec<u32> = Vec::new();
    let start = (k + 1).min(n);
    for u in 0..start as u32 {
        for v in u + 1..start as u32 {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for v in start as u32..n as u32 {
        let mut targets = BTreeSet::new();
        while targets.len() < k.min(v as usize) {
            targets.insert(endpoints[rng.random_range(0..endpoints.len())]);
        }
        for t in targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    edges
}

/// The 200-graph corpus: alternating Erdős–Rényi and Barabási–Albert
/// instances with n ≤ 200.
pub fn random_corpus(count: usize) -> Vec<(usize, Edges)> {
    (0..count as u64)
        .map(|i| {
            let mut rng = StdRng::seed_from_u64(0xC0FFEE ^ i);
            let n = rng.random_range(2..=200);
            if i % 2 == 0 {
                let p = rng.random_range(0.005..0.25);
                (n, erdos_renyi(n, p, i))
            } else {
                let k = rng.random_range(1..=6);
                (n, barabasi_albert(n, k, i))
            }
        })
        .collect()
}

pub fn graph(n: usize, edges: &Edges) -> Graph {
    Graph::from_dense_edges(n, edges.iter().copied()).unwrap()
}

pub fn adjacency_sets(n: usize, edges: &[(u32, u32)]) -> Vec<BTreeSet<u32>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u as usize].insert(v);
            adj[v as usize].insert(u);
        }
    }
    adj
}

/// Repeatedly delete any vertex of minimum degree `d`; its coreness is
/// `max(d, largest d recorded so far)`.
pub fn brute_coreness(n: usize, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut adj = adjacency_sets(n, edges);
    let mut alive: BTreeSet<u32> = (0..n as u32).collect();
    let mut core = vec![0u32; n];
    let mut record = 0u32;
    while let Some(&v) = alive.iter().min_by_key(|&&v| adj[v as usize].len()) {
        let d = adj[v as usize].len() as u32;
        record = record.max(d);
        core[v as usize] = record;
        alive.remove(&v);
        for u in std::mem::take(&mut adj[v as usize]) {
            adj[u as usize].remove(&v);
        }
    }
    core
}

/// Vertices of the k-core of an edge set (by repeated deletion of vertices
/// of degree < k).
pub fn brute_k_core(n: usize, edges: &[(u32, u32)], k: u32) -> BTreeSet<u32> {
    let mut adj = adjacency_sets(n, edges);
    let mut alive: BTreeSet<u32> = (0..n as u32).filter(|&v| !adj[v as usize].is_empty()).collect();
    loop {
        let weak: Vec<u32> = alive.iter().copied().filter(|&v| (adj[v as usize].len() as u32) < k).collect();
        if weak.is_empty() {
            return alive;
        }
        for v in weak {
            alive.remove(&v);
            for u in std::mem::take(&mut adj[v as usize]) {
                adj[u as usize].remove(&v);
            }
        }
    }
}

pub fn union_find_components(n: usize, edges: &[(u32, u32)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut touched = vec![false; n];
    for &(u, v) in edges {
        touched[u as usize] = true;
        touched[v as usize] = true;
        let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
        parent[a] = b;
    }
    let roots: BTreeSet<usize> = (0..n).filter(|&v| touched[v]).map(|v| find(&mut parent, v)).collect();
    roots.len()
}

/// Mean local clustering over vertices incident to `edges`, checking every
/// neighbour pair for adjacency.
pub fn brute_clustering(n: usize, edges: &[(u32, u32)]) -> f64 {
    let adj = adjacency_sets(n, edges);
    let vertices: Vec<usize> = (0..n).filter(|&v| !adj[v].is_empty()).collect();
    if vertices.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for &v in &vertices {
        let nb: Vec<u32> = adj[v].iter().copied().collect();
        let d = nb.len();
        if d < 2 {
            continue;
        }
        let mut t = 0u64;
        for a in 0..d {
            for b in a + 1..d {
                if adj[nb[a] as usize].contains(&nb[b]) {
                    t += 1;
                }
            }
        }
        sum += t as f64 / (d * (d - 1) / 2) as f64;
    }
    sum / vertices.len() as f64
}

/// Hop distances between all pairs (`u32::MAX` = unreachable).
pub fn all_pairs_bfs(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
    let adj = adjacency_sets(n, edges);
    (0..n)
        .map(|s| {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dist[x] + 1;
                        q.push_back(y as usize);
                    }
                }
            }
            dist
        })
        .collect()
}
