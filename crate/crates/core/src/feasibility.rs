//! Linear-time bottom-up feasibility test for the unweighted problem.
//!
//! Each subtree reports its chosen nodes split into at most one *candidate*
//! (`2·d(r, u) < λ`, may still be displaced by an ancestor) and the *certain*
//! nodes (`2·d(r, u) >= λ`), of which only the nearest one matters upward.

use crate::dist::DistIndex;
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Number of chosen nodes, candidate included.
    pub count: usize,
    /// Chosen nodes in ascending id order, when collected.
    pub members: Option<Vec<NodeId>>,
    /// `(node, d(root, node))` with `2·d < λ`.
    pub candidate: Option<(NodeId, u64)>,
    /// Nearest chosen node with `2·d >= λ`.
    pub certain_nearest: Option<(NodeId, u64)>,
    /// Smallest `d(root, u)` over chosen nodes; `u64::MAX` when nothing is chosen.
    pub nearest_dist: u64,
    /// Node visits plus child-link visits; at most `2n`.
    pub visits: u64,
}

const NONE: u32 = u32::MAX;

/// Concatenable singly linked lists over node ids.
struct Lists {
    next: Vec<u32>,
    head: Vec<u32>,
    tail: Vec<u32>,
}

impl Lists {
    fn new(n: usize) -> Lists {
        Lists {
            next: vec![NONE; n],
            head: vec![NONE; n],
            tail: vec![NONE; n],
        }
    }

    fn push(&mut self, list: usize, v: NodeId) {
        let v = v as u32;
        self.next[v as usize] = NONE;
        if self.head[list] == NONE {
            self.head[list] = v;
        } else {
            self.next[self.tail[list] as usize] = v;
        }
        self.tail[list] = v;
    }

    fn append(&mut self, list: usize, other: usize) {
        if self.head[other] == NONE {
            return;
        }
        if self.head[list] == NONE {
            self.head[list] = self.head[other];
        } else {
            self.next[self.tail[list] as usize] = self.head[other];
        }
        self.tail[list] = self.tail[other];
    }

    fn collect(&self, list: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut at = self.head[list];
        while at != NONE {
            out.push(at as NodeId);
            at = self.next[at as usize];
        }
        out
    }
}

fn nearer(a: Option<(NodeId, u64)>, b: Option<(NodeId, u64)>) -> Option<(NodeId, u64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.1 < x.1 { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Maximum-cardinality set of selectable nodes with pairwise distance `>= lambda`,
/// choosing among optimal sets one whose nearest node to the root is farthest.
pub fn feasibility_test(tree: &Tree, index: &DistIndex, lambda: u64, collect_members: bool) -> Solution {
    let n = tree.len();
    let mut count = vec![0usize; n];
    let mut cand: Vec<Option<(NodeId, u64)>> = vec![None; n];
    let mut cert: Vec<Option<(NodeId, u64)>> = vec![None; n];
    let mut lists = if collect_members { Some(Lists::new(n)) } else { None };
    let mut visits = 0u64;
    let certain = |d: u64| 2 * d >= lambda;

    for &r in tree.bfs_order().iter().rev() {
        visits += 1;
        let mut total = 0;
        let mut nearest: Option<(NodeId, u64)> = None;
        let mut best_cand: Option<(NodeId, u64)> = None;
        for &c in tree.children(r) {
            visits += 1;
            let e = tree.edge_len(c);
            total += count[c];
            if let Some(l) = lists.as_mut() {
                l.append(r, c);
            }
            nearest = nearer(nearest, cert[c].map(|(x, d)| (x, d + e)));
            if let Some((u, d)) = cand[c] {
                let d = d + e;
                if certain(d) {
                    total += 1;
                    if let Some(l) = lists.as_mut() {
                        l.push(r, u);
                    }
                    nearest = nearer(nearest, Some((u, d)));
                } else if best_cand.is_none_or(|(_, bd)| d > bd) {
                    best_cand = Some((u, d));
                }
            }
        }
        let mut candidate = None;
        if let Some((u, d)) = best_cand {
            if nearest.is_none_or(|(x, _)| index.dist(u, x) >= lambda) {
                candidate = Some((u, d));
            }
        }
        if tree.is_selectable(r) {
            let closest = nearer(nearest, candidate).map(|(_, d)| d);
            if closest.is_none_or(|d| d >= lambda) {
                if certain(0) {
                    total += 1;
                    if let Some(l) = lists.as_mut() {
                        l.push(r, r);
                    }
                    nearest = Some((r, 0));
                } else {
                    // No candidate survives here: it would lie closer than λ.
                    candidate = Some((r, 0));
                }
            }
        }
        count[r] = total;
        cand[r] = candidate;
        cert[r] = nearest;
    }

    let root = tree.root();
    let candidate = cand[root];
    let members = lists.map(|l| {
        let mut m = l.collect(root);
        m.extend(candidate.map(|c| c.0));
        m.sort_unstable();
        m
    });
    Solution {
        count: count[root] + candidate.is_some() as usize,
        members,
        candidate,
        certain_nearest: cert[root],
        nearest_dist: nearer(cert[root], candidate).map_or(u64::MAX, |(_, d)| d),
        visits,
    }
}

/// Whether some set of `k` selectable nodes has pairwise distances `>= lambda`.
pub fn is_feasible(tree: &Tree, index: &DistIndex, k: usize, lambda: u64) -> bool {
    feasibility_test(tree, index, lambda, false).count >= k
}
