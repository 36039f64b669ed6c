//! Rooted trees with integer edge lengths, node weights and selectability flags,
//! plus the text format used by the command-line tools.
//!
//! Edge lengths are stored unscaled. Every comparison against `λ/2` in the
//! solvers is written as `2·d` against `λ`, so all arithmetic stays integral.
//! Root-to-node path lengths are capped at 2^61, which keeps `2·dist(u, v)` and
//! the sum of two distances inside `u64`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Largest admissible root-to-node path length.
pub const MAX_DEPTH: u64 = 1 << 61;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    edge_len: Vec<u64>,
    weight: Vec<u64>,
    selectable: Vec<bool>,
    children: Vec<Vec<NodeId>>,
    /// Breadth-first order from the root; parents precede children.
    order: Vec<NodeId>,
}

impl Tree {
    /// Builds and validates a tree from an undirected edge list.
    ///
    /// All nodes are selectable. Weights default to 1 when absent.
    pub fn from_edges(
        n: usize,
        edges: &[(NodeId, NodeId, u64)],
        root: NodeId,
        weights: Option<&[u64]>,
    ) -> Result<Tree> {
        if n == 0 {
            return Err(Error::NotATree("empty node set".into()));
        }
        if root >= n {
            return Err(Error::NodeOutOfRange { id: root, n });
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "expected {} edges for {} nodes, got {}",
                n - 1,
                n,
                edges.len()
            )));
        }
        let weight = match weights {
            Some(w) if w.len() != n => {
                return Err(Error::InvalidArgument(format!(
                    "expected {} weights, got {}",
                    n,
                    w.len()
                )))
            }
            Some(w) => w.to_vec(),
            None => vec![1; n],
        };
        let mut adj: Vec<Vec<(NodeId, u64, usize)>> = vec![Vec::new(); n];
        for (idx, &(u, v, len)) in edges.iter().enumerate() {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
            }
            if u == v {
                return Err(Error::NotATree(format!("self-loop at node {u}")));
            }
            adj[u].push((v, len, idx));
            adj[v].push((u, len, idx));
        }

        let mut parent = vec![None; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut edge_len = vec![0u64; n];
        let mut depth = vec![0u64; n];
        let mut seen = vec![false; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, len, idx) in &adj[u] {
                if idx == parent_edge[u] {
                    continue;
                }
                if seen[v] {
                    return Err(Error::NotATree(format!("cycle or duplicate edge at {u}-{v}")));
                }
                seen[v] = true;
                parent[v] = Some(u);
                parent_edge[v] = idx;
                edge_len[v] = len;
                depth[v] = depth[u].checked_add(len).ok_or(Error::LengthOverflow)?;
                if depth[v] > MAX_DEPTH {
                    return Err(Error::LengthOverflow);
                }
                children[u].push(v);
                queue.push_back(v);
            }
        }
        if order.len() != n {
            return Err(Error::NotATree("graph is disconnected".into()));
        }
        Ok(Tree {
            root,
            parent,
            edge_len,
            weight,
            selectable: vec![true; n],
            children,
            order,
        })
    }

    /// Assembles a tree from a parent array. Used by generators and binarization.
    pub(crate) fn from_parts(
        root: NodeId,
        parent: Vec<Option<NodeId>>,
        edge_len: Vec<u64>,
        weight: Vec<u64>,
        selectable: Vec<bool>,
    ) -> Result<Tree> {
        let n = parent.len();
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                edges.push((p, v, edge_len[v]));
            }
        }
        let mut t = Tree::from_edges(n, &edges, root, Some(&weight))?;
        for v in 0..n {
            if !selectable[v] && weight[v] != 0 {
                return Err(Error::InvalidArgument(format!(
                    "non-selectable node {v} must have weight 0"
                )));
            }
        }
        t.selectable = selectable;
        Ok(t)
    }

    /// Same tree with ids renumbered in breadth-first order (root becomes 0),
    /// plus `original[new_id]`. Traversals over the result touch memory in order.
    pub fn relabel_bfs(&self) -> (Tree, Vec<NodeId>) {
        let n = self.len();
        let mut pos = vec![0; n];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        let original = self.order.clone();
        let parent = original.iter().map(|&v| self.parent[v].map(|p| pos[p])).collect();
        let edge_len = original.iter().map(|&v| self.edge_len[v]).collect();
        let weight = original.iter().map(|&v| self.weight[v]).collect();
        let selectable = original.iter().map(|&v| self.selectable[v]).collect();
        let t = Tree::from_parts(0, parent, edge_len, weight, selectable).expect("relabeling preserves validity");
        (t, original)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    /// Length of the edge from `v` to its parent (0 for the root).
    pub fn edge_len(&self, v: NodeId) -> u64 {
        self.edge_len[v]
    }

    pub fn weight(&self, v: NodeId) -> u64 {
        self.weight[v]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weight
    }

    pub fn is_selectable(&self, v: NodeId) -> bool {
        self.selectable[v]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    /// Nodes in breadth-first order; every parent precedes its children.
    pub fn bfs_order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn selectable_count(&self) -> usize {
        self.selectable.iter().filter(|&&s| s).count()
    }

    /// Sum of the weights of selectable nodes.
    pub fn total_weight(&self) -> Result<u64> {
        let mut total = 0u64;
        for v in 0..self.len() {
            if self.selectable[v] {
                total = total.checked_add(self.weight[v]).ok_or(Error::WeightOverflow)?;
            }
        }
        Ok(total)
    }

    pub fn is_binary(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 2)
    }

    /// Distance of every node from the root.
    pub fn depths(&self) -> Vec<u64> {
        let mut depth = vec![0u64; self.len()];
        for &v in &self.order[1..] {
            let p = self.parent[v].expect("non-root has a parent");
            depth[v] = depth[p] + self.edge_len[v];
        }
        depth
    }

    /// Subtree sizes, counting every node (selectable or not).
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.len()];
        for &v in self.order.iter().rev() {
            if let Some(p) = self.parent[v] {
                size[p] += size[v];
            }
        }
        size
    }

    /// Undirected edge list `(parent, child, length)`.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, u64)> {
        (0..self.len())
            .filter_map(|v| self.parent[v].map(|p| (p, v, self.edge_len[v])))
            .collect()
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # comment
    /// n root
    /// u v length      (n-1 lines)
    /// weights w0 ... w(n-1)   (optional)
    /// ```
    pub fn parse(text: &str) -> Result<Tree> {
        let mut header: Option<(usize, NodeId)> = None;
        let mut edges = Vec::new();
        let mut weights: Option<Vec<u64>> = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let mut fields = line.split_whitespace();
            let first = fields.next().unwrap_or("");
            if first == "weights" {
                if weights.is_some() {
                    return Err(perr("duplicate weights line".into()));
                }
                let w = fields
                    .map(|f| f.parse::<u64>().map_err(|e| perr(format!("bad weight '{f}': {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                weights = Some(w);
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|f| f.parse::<u64>().map_err(|e| perr(format!("bad integer '{f}': {e}"))))
                .collect::<Result<Vec<_>>>()?;
            match header {
                None => {
                    if nums.len() != 2 {
                        return Err(perr("header must be `n root`".into()));
                    }
                    header = Some((nums[0] as usize, nums[1] as usize));
                }
                Some(_) => {
                    if weights.is_some() {
                        return Err(perr("edge after weights line".into()));
                    }
                    if nums.len() != 3 {
                        return Err(perr("edge line must be `u v length`".into()));
                    }
                    edges.push((nums[0] as usize, nums[1] as usize, nums[2]));
                }
            }
        }
        let (n, root) = header.ok_or(Error::Parse {
            line: last_line.max(1),
            msg: "missing header".into(),
        })?;
        Tree::from_edges(n, &edges, root, weights.as_deref())
    }

    /// Serializes to the text format. Weights are written only when some weight differs from 1.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.len(), self.root);
        for (u, v, len) in self.edges() {
            let _ = writeln!(out, "{u} {v} {len}");
        }
        if self.weight.iter().any(|&w| w != 1) {
            out.push_str("weights");
            for w in &self.weight {
                let _ = write!(out, " {w}");
            }
            out.push('\n');
        }
        out
    }
}

/// Replaces every node with more than two children by a chain of artificial
/// nodes joined with zero-length edges.
///
/// Returns the binary tree and, for each of its nodes, the original id (or
/// `None` for artificial nodes). Original nodes keep their ids.
pub fn binarize(tree: &Tree) -> (Tree, Vec<Option<NodeId>>) {
    let n = tree.len();
    if tree.is_binary() {
        return (tree.clone(), (0..n).map(Some).collect());
    }
    let mut parent: Vec<Option<NodeId>> = (0..n).map(|v| tree.parent(v)).collect();
    let mut edge_len: Vec<u64> = (0..n).map(|v| tree.edge_len(v)).collect();
    let mut weight = tree.weight.clone();
    let mut selectable = tree.selectable.clone();
    let mut mapping: Vec<Option<NodeId>> = (0..n).map(Some).collect();
    for v in 0..n {
        let ch = tree.children(v);
        if ch.len() <= 2 {
            continue;
        }
        // v keeps ch[0]; each artificial node a_i keeps ch[i] and the next artificial node,
        // the last one keeps the final two children.
        let mut attach = v;
        for (i, &c) in ch.iter().enumerate().skip(1) {
            if i == ch.len() - 1 {
                parent[c] = Some(attach);
                break;
            }
            let a = parent.len();
            parent.push(Some(attach));
            edge_len.push(0);
            weight.push(0);
            selectable.push(false);
            mapping.push(None);
            parent[c] = Some(a);
            attach = a;
        }
    }
    let bin = Tree::from_parts(tree.root, parent, edge_len, weight, selectable)
        .expect("binarization of a valid tree is valid");
    (bin, mapping)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_tree_depths() {
        let t = Tree::from_edges(3, &[(0, 1, 1), (1, 2, 1)], 0, None).unwrap();
        assert_eq!(t.depths(), vec![0, 1, 2]);
        assert_eq!(t.weights(), &[1, 1, 1]);
        assert_eq!(t.selectable_count(), 3);
    }

    #[test]
    fn rejects_duplicate_edge() {
        let err = Tree::from_edges(2, &[(0, 1, 0), (0, 1, 0)], 0, None).unwrap_err();
        assert!(matches!(err, Error::NotATree(_)));
    }

    #[test]
    fn rejects_cycle_and_disconnected() {
        assert!(Tree::from_edges(3, &[(0, 1, 1), (1, 0, 1)], 0, None).is_err());
        assert!(Tree::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)], 0, None).is_err());
        assert!(Tree::from_edges(3, &[(0, 1, 1), (0, 5, 1)], 0, None).is_err());
    }

    #[test]
    fn rejects_overflowing_paths() {
        let big = MAX_DEPTH / 2 + 1;
        let err = Tree::from_edges(3, &[(0, 1, big), (1, 2, big)], 0, None).unwrap_err();
        assert_eq!(err, Error::LengthOverflow);
    }

    #[test]
    fn parse_round_trip_with_weights() {
        let text = "# demo\n3 1\n0 1 2\n1 2 5 # trailing\nweights 4 0 7\n";
        let t = Tree::parse(text).unwrap();
        assert_eq!(t.root(), 1);
        assert_eq!(t.weights(), &[4, 0, 7]);
        assert_eq!(Tree::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = Tree::parse("3 0\n0 1 1\n1 x 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn binarize_star() {
        let t = Tree::from_edges(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)], 0, None).unwrap();
        let (b, map) = binarize(&t);
        assert_eq!(b.len(), 5);
        assert!(b.is_binary());
        assert_eq!(map[4], None);
        assert!(!b.is_selectable(4));
        assert_eq!(b.weight(4), 0);
        assert_eq!(b.edge_len(4), 0);
    }

    #[test]
    fn binarize_binary_is_identity() {
        let t = Tree::from_edges(4, &[(0, 1, 3), (0, 2, 1), (2, 3, 2)], 0, None).unwrap();
        let (b, map) = binarize(&t);
        assert_eq!(b, t);
        assert_eq!(map, vec![Some(0), Some(1), Some(2), Some(3)]);
    }
}
