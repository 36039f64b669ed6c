//! Tree partitioning: good partitions into bounded fragments, and heavy-path
//! decomposition, each with an exhaustive validator.

use crate::error::{Error, Result};
use crate::tree::{NodeId, Tree};

/// Fragment sizes are at most `ALPHA · b`: a fragment is either the subtree of
/// a large node whose children are small (`<= 1 + 2(b - 1)`), a single node, or
/// a chain segment cut as soon as it reaches `b` (`< b + b`).
pub const ALPHA: usize = 2;

/// Fragment count is at most `COUNT_FACTOR · n / b + 1`: leaf fragments,
/// branching singletons, closed chain segments (each `<= n / b`) and one
/// open remainder per chain (`<= 2n / b`).
pub const COUNT_FACTOR: usize = 5;

/// Subtree of `root` minus the subtrees of `holes`.
///
/// At most one hole, except for a single branching node cut out on its own,
/// which excludes both of its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub root: NodeId,
    pub holes: Vec<NodeId>,
    pub nodes: Vec<NodeId>,
    /// Path from `root` down to the parent of the hole (just `root` if none).
    pub spine: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub fragments: Vec<Fragment>,
    pub b: usize,
    pub alpha: usize,
}

fn collect(tree: &Tree, root: NodeId, holes: &[NodeId]) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        out.push(v);
        stack.extend(tree.children(v).iter().copied().filter(|c| !holes.contains(c)));
    }
    out
}

/// Partitions a binary tree into `O(n / b)` fragments of at most `ALPHA · b`
/// nodes, each touching the rest of the tree only at its root and the parent
/// of its hole. O(n).
pub fn good_partition(tree: &Tree, b: usize) -> Result<Partition> {
    if b == 0 {
        return Err(Error::InvalidArgument("b must be at least 1".into()));
    }
    if let Some(v) = (0..tree.len()).find(|&v| tree.children(v).len() > 2) {
        return Err(Error::NotBinary(v));
    }
    let size = tree.subtree_sizes();
    let large = |v: NodeId| size[v] >= b;
    let large_children = |v: NodeId| tree.children(v).iter().filter(|&&c| large(c)).count();
    let chain = |v: NodeId| large(v) && large_children(v) == 1;
    let mut fragments = Vec::new();
    if !large(tree.root()) {
        fragments.push(Fragment {
            root: tree.root(),
            holes: Vec::new(),
            nodes: collect(tree, tree.root(), &[]),
            spine: vec![tree.root()],
        });
    }
    for &v in tree.bfs_order().iter().rev() {
        if !large(v) {
            continue;
        }
        match large_children(v) {
            0 => fragments.push(Fragment {
                root: v,
                holes: Vec::new(),
                nodes: collect(tree, v, &[]),
                spine: vec![v],
            }),
            2 => fragments.push(Fragment {
                root: v,
                holes: tree.children(v).to_vec(),
                nodes: vec![v],
                spine: vec![v],
            }),
            _ => {
                let below = tree.children(v).iter().copied().find(|&c| large(c)).unwrap();
                if chain(below) {
                    continue;
                }
                // v is the bottom of a unary chain: cut it bottom-up.
                let mut hole = below;
                let mut prev = below;
                let mut seg: Vec<NodeId> = Vec::new();
                let mut acc = 0;
                let mut at = Some(v);
                while let Some(u) = at.filter(|&u| chain(u)) {
                    seg.push(u);
                    // u plus its small child's subtree, if any.
                    acc += size[u] - size[prev];
                    prev = u;
                    if acc >= b || !tree.parent(u).is_some_and(chain) {
                        seg.reverse();
                        fragments.push(Fragment {
                            root: u,
                            holes: vec![hole],
                            nodes: collect(tree, u, &[hole]),
                            spine: std::mem::take(&mut seg),
                        });
                        hole = u;
                        acc = 0;
                    }
                    at = tree.parent(u);
                }
            }
        }
    }
    Ok(Partition { fragments, b, alpha: ALPHA })
}

/// Summary of a partition that passed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub fragments: usize,
    pub max_size: usize,
    pub size_bound: usize,
    pub count_bound: usize,
}

/// Checks coverage, disjointness, fragment shape, boundary nodes and the
/// size and count bounds.
pub fn validate_partition(tree: &Tree, part: &Partition) -> Result<PartitionReport> {
    let n = tree.len();
    let b = part.b.max(1);
    let size = tree.subtree_sizes();
    // Entry/exit times for ancestor tests.
    let (mut tin, mut tout) = (vec![0usize; n], vec![0usize; n]);
    let mut clock = 0;
    let mut stack = vec![(tree.root(), false)];
    while let Some((v, done)) = stack.pop() {
        if done {
            tout[v] = clock;
            continue;
        }
        tin[v] = clock;
        clock += 1;
        stack.push((v, true));
        stack.extend(tree.children(v).iter().map(|&c| (c, false)));
    }
    let inside = |anc: NodeId, v: NodeId| tin[anc] <= tin[v] && tin[v] < tout[anc];
    let fail = |i: usize, msg: String| Error::Partition(format!("fragment {i}: {msg}"));

    let mut owner = vec![usize::MAX; n];
    let size_bound = part.alpha * b;
    let mut max_size = 0;
    for (i, f) in part.fragments.iter().enumerate() {
        if f.root >= n || f.holes.iter().any(|&h| h >= n) || f.nodes.iter().any(|&v| v >= n) {
            return Err(fail(i, "node id out of range".into()));
        }
        if f.holes.len() > 2 || (f.holes.len() == 2 && f.nodes.len() != 1) {
            return Err(fail(
                i,
                format!(
                    "boundary violation: {} holes on a fragment of {} nodes give {} boundary nodes",
                    f.holes.len(),
                    f.nodes.len(),
                    f.holes.len() + 1
                ),
            ));
        }
        for &h in &f.holes {
            if h == f.root || !inside(f.root, h) {
                return Err(fail(i, format!("hole {h} is not a proper descendant of root {}", f.root)));
            }
        }
        let expect = size[f.root] - f.holes.iter().map(|&h| size[h]).sum::<usize>();
        for &v in &f.nodes {
            if !inside(f.root, v) || f.holes.iter().any(|&h| inside(h, v)) {
                return Err(fail(i, format!("node {v} outside subtree(root) minus subtree(hole)")));
            }
            if owner[v] != usize::MAX {
                return Err(fail(i, format!("node {v} also in fragment {}", owner[v])));
            }
            owner[v] = i;
        }
        if f.nodes.len() != expect {
            return Err(fail(i, format!("has {} nodes, shape implies {expect}", f.nodes.len())));
        }
        if f.nodes.len() > size_bound {
            return Err(fail(i, format!("size {} exceeds {}·{b}", f.nodes.len(), part.alpha)));
        }
        max_size = max_size.max(f.nodes.len());
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::Partition(format!("node {v} is not covered")));
    }
    for (i, f) in part.fragments.iter().enumerate() {
        let mut boundary: Vec<NodeId> = Vec::new();
        for &v in &f.nodes {
            let outside = tree.parent(v).is_some_and(|p| owner[p] != i)
                || tree.children(v).iter().any(|&c| owner[c] != i);
            if outside {
                boundary.push(v);
            }
        }
        let allowed: Vec<NodeId> = std::iter::once(f.root)
            .chain(f.holes.iter().filter_map(|&h| tree.parent(h)))
            .collect();
        if boundary.len() > 2 || boundary.iter().any(|v| !allowed.contains(v)) {
            return Err(fail(i, format!("boundary nodes {boundary:?}, allowed {allowed:?}")));
        }
    }
    let count_bound = COUNT_FACTOR * n / b + 1;
    if part.fragments.len() > count_bound {
        return Err(Error::Partition(format!(
            "{} fragments exceed {COUNT_FACTOR}·{n}/{b} + 1",
            part.fragments.len()
        )));
    }
    Ok(PartitionReport {
        fragments: part.fragments.len(),
        max_size,
        size_bound,
        count_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyPath {
    pub head: NodeId,
    pub tail: NodeId,
    /// Head first.
    pub nodes: Vec<NodeId>,
    /// Light edges between the root and `head`.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyPathDecomp {
    pub paths: Vec<HeavyPath>,
    pub path_of: Vec<usize>,
}

impl HeavyPathDecomp {
    pub fn max_depth(&self) -> usize {
        self.paths.iter().map(|p| p.depth).max().unwrap_or(0)
    }
}

/// Follows from each node the child with the largest subtree (lowest id on ties).
pub fn heavy_path_decomposition(tree: &Tree) -> HeavyPathDecomp {
    let size = tree.subtree_sizes();
    let heavy = |v: NodeId| -> Option<NodeId> {
        tree.children(v)
            .iter()
            .copied()
            .max_by(|&a, &b| size[a].cmp(&size[b]).then(b.cmp(&a)))
    };
    let mut paths: Vec<HeavyPath> = Vec::new();
    let mut path_of = vec![usize::MAX; tree.len()];
    for &h in tree.bfs_order() {
        if path_of[h] != usize::MAX {
            continue;
        }
        let depth = tree.parent(h).map_or(0, |p| paths[path_of[p]].depth + 1);
        let id = paths.len();
        let mut nodes = vec![h];
        path_of[h] = id;
        let mut at = h;
        while let Some(c) = heavy(at) {
            path_of[c] = id;
            nodes.push(c);
            at = c;
        }
        paths.push(HeavyPath { head: h, tail: at, nodes, depth });
    }
    HeavyPathDecomp { paths, path_of }
}

/// `ceil(log2 n) + 1`, the depth bound for heavy paths.
pub fn heavy_depth_bound(n: usize) -> usize {
    n.max(1).next_power_of_two().trailing_zeros() as usize + 1
}

/// Checks that every node lies on exactly one path, paths are parent-child
/// chains headed by their shallowest node, heavy children are chosen
/// correctly, and depths respect the bound.
pub fn validate_heavy_paths(tree: &Tree, hpd: &HeavyPathDecomp) -> Result<()> {
    let n = tree.len();
    let size = tree.subtree_sizes();
    let bad = |msg: String| Error::Partition(format!("heavy paths: {msg}"));
    let mut seen = vec![false; n];
    for (i, p) in hpd.paths.iter().enumerate() {
        if p.nodes.first() != Some(&p.head) || p.nodes.last() != Some(&p.tail) {
            return Err(bad(format!("path {i} head/tail mismatch")));
        }
        if tree.parent(p.head).is_some_and(|q| hpd.path_of[q] == i) {
            return Err(bad(format!("path {i} head is not its shallowest node")));
        }
        for w in p.nodes.windows(2) {
            if tree.parent(w[1]) != Some(w[0]) {
                return Err(bad(format!("path {i} is not a downward chain")));
            }
            let best = tree.children(w[0]).iter().map(|&c| size[c]).max().unwrap();
            if size[w[1]] != best {
                return Err(bad(format!("path {i} follows a light edge at {}", w[0])));
            }
        }
        for &v in &p.nodes {
            if std::mem::replace(&mut seen[v], true) || hpd.path_of[v] != i {
                return Err(bad(format!("node {v} misassigned")));
            }
        }
        let expect = tree.parent(p.head).map_or(0, |q| hpd.paths[hpd.path_of[q]].depth + 1);
        if p.depth != expect {
            return Err(bad(format!("path {i} depth {} != {expect}", p.depth)));
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(bad("some node is on no path".into()));
    }
    if hpd.max_depth() > heavy_depth_bound(n) {
        return Err(bad(format!("depth {} exceeds {}", hpd.max_depth(), heavy_depth_bound(n))));
    }
    Ok(())
}
