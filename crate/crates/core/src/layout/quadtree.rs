//! Barnes-Hut quadtree over a point set.
//!
//! Nodes cover contiguous ranges of a permutation of the point indices, so
//! "does this cell contain point i" is a range check.

use alloc::vec;
use alloc::vec::Vec;

const NONE: u32 = u32::MAX;
// Coincident points stop splitting here and share a leaf.
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone)]
struct Node {
    start: u32,
    len: u32,
    width: f64,
    mass: f64,
    com: [f64; 2],
    children: [u32; 4],
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.children == [NONE; 4]
    }
}

pub(crate) struct QuadTree {
    nodes: Vec<Node>,
    perm: Vec<u32>,
    slot: Vec<u32>,
}

impl QuadTree {
    pub fn build(points: &[[f64; 2]]) -> Self {
        let n = points.len();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let width = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
        let mut tree = QuadTree { nodes: Vec::new(), perm: (0..n as u32).collect(), slot: vec![0; n] };
        if n > 0 {
            let mut scratch = Vec::with_capacity(n);
            tree.split(points, 0, n, lo, width, 0, &mut scratch);
        }
        for (s, &i) in tree.perm.iter().enumerate() {
            tree.slot[i as usize] = s as u32;
        }
        tree
    }

    #[allow(clippy::too_many_arguments)]
    fn split(
        &mut self,
        points: &[[f64; 2]],
        start: usize,
        len: usize,
        origin: [f64; 2],
        width: f64,
        depth: u32,
        scratch: &mut Vec<u32>,
    ) -> u32 {
        let id = self.nodes.len() as u32;
        let members = &self.perm[start..start + len];
        let (mut sx, mut sy) = (0.0, 0.0);
        for &i in members {
            sx += points[i as usize][0];
            sy += points[i as usize][1];
        }
        let mass = len as f64;
        self.nodes.push(Node {
            start: start as u32,
            len: len as u32,
            width,
            mass,
            com: [sx / mass, sy / mass],
            children: [NONE; 4],
        });
        if len <= 1 || depth >= MAX_DEPTH {
            return id;
        }

        // Stable partition into quadrants 0..4 (bit 0: right half, bit 1: upper half).
        let half = width / 2.0;
        let mid = [origin[0] + half, origin[1] + half];
        let quadrant = |i: u32| {
            let p = points[i as usize];
            (p[0] >= mid[0]) as usize | (((p[1] >= mid[1]) as usize) << 1)
        };
        let mut counts = [0usize; 4];
        for &i in members {
            counts[quadrant(i)] += 1;
        }
        scratch.clear();
        for q in 0..4 {
            scratch.extend(members.iter().copied().filter(|&i| quadrant(i) == q));
        }
        self.perm[start..start + len].copy_from_slice(scratch);

        let mut offset = start;
        let mut children = [NONE; 4];
        for q in 0..4 {
            if counts[q] > 0 {
                let child_origin = [origin[0] + half * (q & 1) as f64, origin[1] + half * (q >> 1) as f64];
                children[q] = self.split(points, offset, counts[q], child_origin, half, depth + 1, scratch);
            }
            offset += counts[q];
        }
        self.nodes[id as usize].children = children;
        id
    }

    /// Sum over cells of `kernel(dx, dy, mass)` for point `i`, with
    /// `(dx, dy) = p_i − centre`. Cells not containing `i` whose
    /// `width / distance < theta` are aggregated; everything else is opened
    /// down to individual points.
    pub fn accumulate(
        &self,
        points: &[[f64; 2]],
        i: usize,
        theta: f64,
        mut kernel: impl FnMut(f64, f64, f64, usize) -> [f64; 2],
    ) -> [f64; 2] {
        let mut total = [0.0, 0.0];
        if self.nodes.is_empty() {
            return total;
        }
        let p = points[i];
        let own = self.slot[i];
        let mut stack: Vec<u32> = vec![0];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            let contains_self = own >= node.start && own < node.start + node.len;
            if node.is_leaf() {
                for &j in &self.perm[node.start as usize..(node.start + node.len) as usize] {
                    if j as usize != i {
                        let q = points[j as usize];
                        let f = kernel(p[0] - q[0], p[1] - q[1], 1.0, j as usize);
                        total[0] += f[0];
                        total[1] += f[1];
                    }
                }
                continue;
            }
            let (dx, dy) = (p[0] - node.com[0], p[1] - node.com[1]);
            let dist = libm::sqrt(dx * dx + dy * dy);
            if !contains_self && node.width < theta * dist {
                let f = kernel(dx, dy, node.mass, usize::MAX);
                total[0] += f[0];
                total[1] += f[1];
            } else {
                // reverse so children are visited in quadrant order
                for &c in node.children.iter().rev() {
                    if c != NONE {
                        stack.push(c);
                    }
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(points: &[[f64; 2]], i: usize) -> [f64; 2] {
        let mut t = [0.0, 0.0];
        for (j, q) in points.iter().enumerate() {
            if j != i {
                let (dx, dy) = (points[i][0] - q[0], points[i][1] - q[1]);
                let d2 = dx * dx + dy * dy;
                t[0] += dx / d2;
                t[1] += dy / d2;
            }
        }
        t
    }

    fn grid_points() -> Vec<[f64; 2]> {
        (0..100).map(|k| [(k % 10) as f64 + 0.01 * k as f64, (k / 10) as f64 * 1.3]).collect()
    }

    #[test]
    fn theta_zero_is_exact() {
        let pts = grid_points();
        let tree = QuadTree::build(&pts);
        for i in [0, 17, 55, 99] {
            let f = tree.accumulate(&pts, i, 0.0, |dx, dy, m, _| {
                let d2 = dx * dx + dy * dy;
                [m * dx / d2, m * dy / d2]
            });
            let b = brute(&pts, i);
            assert!((f[0] - b[0]).abs() < 1e-9 && (f[1] - b[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn approximation_is_close() {
        let pts = grid_points();
        let tree = QuadTree::build(&pts);
        let f = tree.accumulate(&pts, 0, 0.5, |dx, dy, m, _| {
            let d2 = dx * dx + dy * dy;
            [m * dx / d2, m * dy / d2]
        });
        let b = brute(&pts, 0);
        let err = libm::hypot(f[0] - b[0], f[1] - b[1]) / libm::hypot(b[0], b[1]);
        assert!(err < 0.05, "relative error {err}");
    }

    #[test]
    fn coincident_points_terminate() {
        let pts = vec![[1.0, 1.0]; 5];
        let tree = QuadTree::build(&pts);
        let mut seen = 0;
        tree.accumulate(&pts, 2, 0.5, |_, _, _, _| {
            seen += 1;
            [0.0, 0.0]
        });
        assert_eq!(seen, 4);
    }
}
