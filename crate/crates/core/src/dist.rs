//! Constant-time tree distances via Euler tour + sparse-table LCA.

use crate::tree::{NodeId, Tree};

/// Answers `dist(u, v)` in O(1) after O(n log n) preprocessing.
///
/// Immutable once built; share freely across threads.
#[derive(Debug, Clone)]
pub struct DistIndex {
    depth: Vec<u64>,
    level: Vec<u32>,
    first: Vec<u32>,
    euler: Vec<u32>,
    /// `sparse[j][i]` is the euler position with minimum level in `[i, i + 2^j)`.
    sparse: Vec<Vec<u32>>,
}

impl DistIndex {
    pub fn new(tree: &Tree) -> DistIndex {
        let n = tree.len();
        let depth = tree.depths();
        let mut level = vec![0u32; n];
        for &v in &tree.bfs_order()[1..] {
            level[v] = level[tree.parent(v).unwrap()] + 1;
        }
        let mut first = vec![0u32; n];
        let mut euler = Vec::with_capacity(2 * n);
        // Iterative DFS: (node, next child index).
        let mut stack: Vec<(NodeId, usize)> = vec![(tree.root(), 0)];
        first[tree.root()] = 0;
        euler.push(tree.root() as u32);
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let ch = tree.children(v);
            if *next < ch.len() {
                let c = ch[*next];
                *next += 1;
                first[c] = euler.len() as u32;
                euler.push(c as u32);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler.push(p as u32);
                }
            }
        }
        let m = euler.len();
        let mut sparse: Vec<Vec<u32>> = vec![(0..m as u32).collect()];
        let mut span = 1;
        while 2 * span <= m {
            let prev = sparse.last().unwrap();
            let row: Vec<u32> = (0..=m - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if level[euler[a as usize] as usize] <= level[euler[b as usize] as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            sparse.push(row);
            span *= 2;
        }
        DistIndex {
            depth,
            level,
            first,
            euler,
            sparse,
        }
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    /// Distance from the root.
    pub fn depth(&self, v: NodeId) -> u64 {
        self.depth[v]
    }

    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        let (mut a, mut b) = (self.first[u] as usize, self.first[v] as usize);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let len = b - a + 1;
        let j = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let (x, y) = (self.sparse[j][a], self.sparse[j][b + 1 - (1 << j)]);
        let (ex, ey) = (self.euler[x as usize] as usize, self.euler[y as usize] as usize);
        if self.level[ex] <= self.level[ey] {
            ex
        } else {
            ey
        }
    }

    pub fn dist(&self, u: NodeId, v: NodeId) -> u64 {
        let w = self.lca(u, v);
        self.depth[u] + self.depth[v] - 2 * self.depth[w]
    }
}
