//! Brute-force reference implementations.
//!
//! Nothing here touches [`crate::dist::DistIndex`] or the solvers: distances
//! come from plain traversals and answers from exhaustive enumeration, so these
//! functions can serve as independent checks.

mod naive_polyline;

pub use naive_polyline::NaivePolyline;

use crate::error::{Error, Result};
use crate::tree::{NodeId, Tree};

/// Enumeration cap for the exhaustive searches.
pub const MAX_BRUTE_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// λ*, a cardinality, or a total weight depending on the query.
    pub best_value: u64,
    pub witness: Vec<NodeId>,
}

/// Result of [`brute_search`]: a maximum-cardinality set with `f(P) >= λ`,
/// tie-broken by the largest minimum distance to the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptimum {
    pub count: usize,
    pub members: Vec<NodeId>,
    /// `min d(root, u)` over members; `u64::MAX` for the empty set.
    pub nearest_dist: u64,
}

/// All-pairs distances by a traversal from every node. O(n²).
pub fn all_pairs(tree: &Tree) -> Vec<Vec<u64>> {
    let n = tree.len();
    let mut adj: Vec<Vec<(NodeId, u64)>> = vec![Vec::new(); n];
    for (u, v, len) in tree.edges() {
        adj[u].push((v, len));
        adj[v].push((u, len));
    }
    (0..n)
        .map(|src| {
            let mut dist = vec![u64::MAX; n];
            dist[src] = 0;
            let mut stack = vec![src];
            while let Some(u) = stack.pop() {
                for &(v, len) in &adj[u] {
                    if dist[v] == u64::MAX {
                        dist[v] = dist[u] + len;
                        stack.push(v);
                    }
                }
            }
            dist
        })
        .collect()
}

/// Tree diameter by the double-sweep method.
pub fn diameter(tree: &Tree) -> u64 {
    let far = |src: NodeId| -> (NodeId, u64) {
        let d = sweep(tree, src);
        let (mut best, mut at) = (0, src);
        for (v, &dv) in d.iter().enumerate() {
            if dv > best {
                best = dv;
                at = v;
            }
        }
        (at, best)
    };
    let (a, _) = far(tree.root());
    far(a).1
}

/// Largest distance between two selectable nodes, by all pairs.
pub fn selectable_diameter(tree: &Tree) -> u64 {
    let d = all_pairs(tree);
    let sel: Vec<_> = (0..tree.len()).filter(|&v| tree.is_selectable(v)).collect();
    let mut best = 0;
    for &u in &sel {
        for &v in &sel {
            best = best.max(d[u][v]);
        }
    }
    best
}

fn sweep(tree: &Tree, src: NodeId) -> Vec<u64> {
    let n = tree.len();
    let mut adj: Vec<Vec<(NodeId, u64)>> = vec![Vec::new(); n];
    for (u, v, len) in tree.edges() {
        adj[u].push((v, len));
        adj[v].push((u, len));
    }
    let mut dist = vec![u64::MAX; n];
    dist[src] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &(v, len) in &adj[u] {
            if dist[v] == u64::MAX {
                dist[v] = dist[u] + len;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn check_size(tree: &Tree) -> Result<()> {
    if tree.len() > MAX_BRUTE_N {
        return Err(Error::TooLarge {
            n: tree.len(),
            max: MAX_BRUTE_N,
        });
    }
    Ok(())
}

/// Exhaustive maximum-cardinality set with pairwise distances `>= lambda`.
pub fn brute_search(tree: &Tree, lambda: u64) -> Result<SearchOptimum> {
    check_size(tree)?;
    let d = all_pairs(tree);
    let root = tree.root();
    let nodes: Vec<NodeId> = (0..tree.len()).filter(|&v| tree.is_selectable(v)).collect();
    let mut best = SearchOptimum {
        count: 0,
        members: Vec::new(),
        nearest_dist: u64::MAX,
    };
    let mut chosen = Vec::new();
    search_rec(&nodes, 0, &d, lambda, root, &mut chosen, u64::MAX, &mut best);
    best.members.sort_unstable();
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn search_rec(
    nodes: &[NodeId],
    i: usize,
    d: &[Vec<u64>],
    lambda: u64,
    root: NodeId,
    chosen: &mut Vec<NodeId>,
    nearest: u64,
    best: &mut SearchOptimum,
) {
    if chosen.len() + (nodes.len() - i) < best.count {
        return;
    }
    if i == nodes.len() {
        if chosen.len() > best.count || (chosen.len() == best.count && nearest > best.nearest_dist) {
            best.count = chosen.len();
            best.members = chosen.clone();
            best.nearest_dist = nearest;
        }
        return;
    }
    let v = nodes[i];
    if chosen.iter().all(|&u| d[u][v] >= lambda) {
        chosen.push(v);
        search_rec(nodes, i + 1, d, lambda, root, chosen, nearest.min(d[root][v]), best);
        chosen.pop();
    }
    search_rec(nodes, i + 1, d, lambda, root, chosen, nearest, best);
}

/// `max over k-subsets of min pairwise distance`, found by scanning candidate
/// distances downward with [`brute_search`].
pub fn brute_optimize(tree: &Tree, k: usize) -> Result<OracleResult> {
    check_size(tree)?;
    let sel = tree.selectable_count();
    if k < 2 || k > sel {
        return Err(Error::InvalidArgument(format!(
            "k = {k} outside [2, {sel}]"
        )));
    }
    let d = all_pairs(tree);
    let mut cands: Vec<u64> = Vec::new();
    for u in 0..tree.len() {
        for v in u + 1..tree.len() {
            if tree.is_selectable(u) && tree.is_selectable(v) {
                cands.push(d[u][v]);
            }
        }
    }
    cands.sort_unstable();
    cands.dedup();
    for &lambda in cands.iter().rev() {
        let s = brute_search(tree, lambda)?;
        if s.count >= k {
            return Ok(OracleResult {
                best_value: lambda,
                witness: s.members,
            });
        }
    }
    unreachable!("lambda = smallest pairwise distance admits every selectable node")
}

/// Exhaustive maximum total weight of a set with pairwise distances `>= lambda`.
pub fn brute_weighted(tree: &Tree, lambda: u64) -> Result<OracleResult> {
    check_size(tree)?;
    let d = all_pairs(tree);
    let nodes: Vec<NodeId> = (0..tree.len()).filter(|&v| tree.is_selectable(v)).collect();
    // suffix[i] = total weight of nodes[i..], for pruning.
    let mut suffix = vec![0u64; nodes.len() + 1];
    for i in (0..nodes.len()).rev() {
        suffix[i] = suffix[i + 1] + tree.weight(nodes[i]);
    }
    let mut best = OracleResult {
        best_value: 0,
        witness: Vec::new(),
    };
    let mut chosen = Vec::new();
    weighted_rec(tree, &nodes, &suffix, 0, &d, lambda, &mut chosen, 0, &mut best);
    best.witness.sort_unstable();
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn weighted_rec(
    tree: &Tree,
    nodes: &[NodeId],
    suffix: &[u64],
    i: usize,
    d: &[Vec<u64>],
    lambda: u64,
    chosen: &mut Vec<NodeId>,
    weight: u64,
    best: &mut OracleResult,
) {
    if weight > best.best_value || best.witness.is_empty() && chosen.len() > best.witness.len() {
        best.best_value = weight;
        best.witness = chosen.clone();
    }
    if i == nodes.len() || weight + suffix[i] <= best.best_value {
        return;
    }
    let v = nodes[i];
    if chosen.iter().all(|&u| d[u][v] >= lambda) {
        chosen.push(v);
        weighted_rec(tree, nodes, suffix, i + 1, d, lambda, chosen, weight + tree.weight(v), best);
        chosen.pop();
    }
    weighted_rec(tree, nodes, suffix, i + 1, d, lambda, chosen, weight, best);
}
