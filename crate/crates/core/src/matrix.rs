//! Candidate values for the optimizers and the parametric search over them.
//!
//! Every pairwise distance between selectable nodes is an entry of one of the
//! implicit sorted matrices `M[i, j] = L[i] + L[j]` (`i < j`), one per centroid,
//! where `L` lists the distances from the centroid to the selectable nodes of
//! its component.

use crate::dist::DistIndex;
use crate::error::{Error, Result};
use crate::tree::{binarize, NodeId, Tree};

/// Implicit matrix over a sorted base list; only the strict upper triangle counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedMatrix {
    base: Vec<u64>,
}

impl SortedMatrix {
    pub fn new(base: Vec<u64>) -> Result<SortedMatrix> {
        if base.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("matrix base list must be sorted".into()));
        }
        Ok(SortedMatrix { base })
    }

    pub fn base(&self) -> &[u64] {
        &self.base
    }

    pub fn side(&self) -> usize {
        self.base.len()
    }

    /// `L[i] + L[j]`, 0-based, for `i < j`.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < j);
        self.base[i] + self.base[j]
    }

    pub fn entry_count(&self) -> usize {
        let s = self.side();
        s * s.saturating_sub(1) / 2
    }

    pub fn entries(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.side()).flat_map(move |i| (i + 1..self.side()).map(move |j| self.entry(i, j)))
    }
}

fn merge(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

const NONE: usize = usize::MAX;

/// Centroid decomposition: (centroid parent, attachment node, creation order).
/// The attachment node of `h` is the neighbour of its centroid parent inside
/// the piece that `h` was chosen from.
fn centroid_decomposition(tree: &Tree) -> (Vec<usize>, Vec<usize>, Vec<NodeId>) {
    let n = tree.len();
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = tree.parent(v) {
            adj[v].push(p);
            adj[p].push(v);
        }
    }
    let mut removed = vec![false; n];
    let mut cpar = vec![NONE; n];
    let mut attach = vec![NONE; n];
    let mut order = Vec::with_capacity(n);
    let mut size = vec![0usize; n];
    let mut from = vec![NONE; n];
    let mut comp = Vec::new();
    let mut work = vec![(tree.root(), NONE)];
    while let Some((start, pc)) = work.pop() {
        comp.clear();
        comp.push(start);
        from[start] = NONE;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in &adj[v] {
                if !removed[w] && w != from[v] {
                    from[w] = v;
                    comp.push(w);
                }
            }
        }
        for &v in comp.iter().rev() {
            size[v] = 1 + adj[v]
                .iter()
                .filter(|&&w| !removed[w] && w != from[v])
                .map(|&w| size[w])
                .sum::<usize>();
        }
        let total = comp.len();
        let mut c = start;
        loop {
            let heavy = adj[c]
                .iter()
                .copied()
                .find(|&w| !removed[w] && w != from[c] && 2 * size[w] > total);
            match heavy {
                Some(w) => c = w,
                None => break,
            }
        }
        removed[c] = true;
        cpar[c] = pc;
        attach[c] = if pc == NONE { NONE } else { start };
        order.push(c);
        for &w in &adj[c] {
            if !removed[w] {
                work.push((w, c));
            }
        }
    }
    (cpar, attach, order)
}

/// One matrix per centroid with at least two selectable nodes in its component.
///
/// Runs on the binarized tree so every centroid has at most three children,
/// and builds each sorted list by merging already-sorted lists of deeper
/// centroids: O(n log n) overall.
pub fn centroid_matrices(tree: &Tree) -> Vec<SortedMatrix> {
    let (bin, _) = binarize(tree);
    let index = DistIndex::new(&bin);
    let n = bin.len();
    let (cpar, attach, order) = centroid_decomposition(&bin);
    let mut cchildren: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &h in &order {
        if cpar[h] != NONE {
            cchildren[cpar[h]].push(h);
        }
    }
    // far[h]: sorted distances from cpar[h] to the selectable nodes of h's piece.
    let mut far: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut matrices = Vec::new();
    let mut chain = Vec::new();
    for &h in order.iter().rev() {
        let own: &[u64] = if bin.is_selectable(h) { &[0] } else { &[] };
        let mut d = own.to_vec();
        for &q in &cchildren[h] {
            d = merge(&d, &far[q]);
        }
        if d.len() >= 2 {
            matrices.push(SortedMatrix { base: d });
        }
        let c = cpar[h];
        if c == NONE {
            continue;
        }
        chain.clear();
        let mut g = attach[h];
        while g != h {
            chain.push(g);
            g = cpar[g];
        }
        chain.push(h);
        let mut acc: Vec<u64> = Vec::new();
        let mut below = NONE;
        for &g in &chain {
            let dg = index.dist(c, g);
            let mut level: Vec<u64> = if bin.is_selectable(g) { vec![dg] } else { Vec::new() };
            for &q in &cchildren[g] {
                if q != below {
                    let shifted: Vec<u64> = far[q].iter().map(|&x| x + dg).collect();
                    level = merge(&level, &shifted);
                }
            }
            acc = merge(&level, &acc);
            below = g;
        }
        far[h] = acc;
    }
    matrices
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop once at most `p` live entries remain; 0 searches to the end.
    pub p: usize,
    /// Re-test the final bounds and fail on an inconsistent oracle.
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    /// Largest value proven feasible (0 is feasible by assumption).
    pub lambda1: u64,
    /// Smallest value proven infeasible, if any was tested.
    pub lambda2: Option<u64>,
    pub ft_calls: u64,
    /// Entries strictly between the bounds when stopped early, sorted.
    pub survivors: Vec<u64>,
}

struct Row {
    m: u32,
    i: u32,
    /// Live columns `[lo, hi)`.
    lo: u32,
    hi: u32,
}

/// Value at weighted rank `ceil(total / 2)` among `(value, weight)` items.
fn weighted_median(items: &mut [(u64, u64)], total: u64) -> u64 {
    let mut target = total.div_ceil(2);
    let mut s = items;
    loop {
        let mid = s.len() / 2;
        s.select_nth_unstable(mid);
        let left: u64 = s[..mid].iter().map(|e| e.1).sum();
        if left >= target {
            s = &mut s[..mid];
        } else if left + s[mid].1 >= target {
            return s[mid].0;
        } else {
            target -= left + s[mid].1;
            s = &mut s[mid + 1..];
        }
    }
}

/// Shrinks `[lambda1, lambda2)` around the largest feasible entry using a
/// monotone oracle (feasible for small values). Each call tests the weighted
/// median of the live rows' medians, which discards at least a quarter of the
/// live entries, so the call count is O(log(total entries)).
pub fn parametric_search<F>(matrices: &[SortedMatrix], mut oracle: F, opts: SearchOptions) -> Result<SearchState>
where
    F: FnMut(u64) -> Result<bool>,
{
    let mut state = SearchState {
        lambda1: 0,
        lambda2: None,
        ft_calls: 0,
        survivors: Vec::new(),
    };
    let mut rows = Vec::new();
    for (m, mat) in matrices.iter().enumerate() {
        let s = mat.side();
        for i in 0..s.saturating_sub(1) {
            // Entries equal to 0 are feasible without asking.
            let lo = i + 1 + mat.base[i + 1..].partition_point(|&b| mat.base[i] + b == 0);
            if lo < s {
                rows.push(Row { m: m as u32, i: i as u32, lo: lo as u32, hi: s as u32 });
            }
        }
    }
    let mut medians = Vec::with_capacity(rows.len());
    loop {
        let live: u64 = rows.iter().map(|r| (r.hi - r.lo) as u64).sum();
        if live == 0 || (opts.p > 0 && live <= opts.p as u64) {
            break;
        }
        medians.clear();
        medians.extend(rows.iter().map(|r| {
            let mat = &matrices[r.m as usize];
            let mid = r.lo + (r.hi - r.lo - 1) / 2;
            (mat.entry(r.i as usize, mid as usize), (r.hi - r.lo) as u64)
        }));
        let x = weighted_median(&mut medians, live);
        state.ft_calls += 1;
        let feasible = oracle(x)?;
        if feasible {
            state.lambda1 = x;
        } else {
            state.lambda2 = Some(x);
        }
        rows.retain_mut(|r| {
            let mat = &matrices[r.m as usize];
            let a = mat.base[r.i as usize];
            let cols = &mat.base[r.lo as usize..r.hi as usize];
            if feasible {
                r.lo += cols.partition_point(|&b| a + b <= x) as u32;
            } else {
                r.hi = r.lo + cols.partition_point(|&b| a + b < x) as u32;
            }
            r.lo < r.hi
        });
    }
    if opts.p > 0 {
        for r in &rows {
            let mat = &matrices[r.m as usize];
            state
                .survivors
                .extend((r.lo..r.hi).map(|j| mat.entry(r.i as usize, j as usize)));
        }
        state.survivors.sort_unstable();
    }
    if opts.verify {
        state.ft_calls += 1;
        if !oracle(state.lambda1)? {
            return Err(Error::NonMonotoneOracle(format!(
                "value {} was feasible and is now infeasible",
                state.lambda1
            )));
        }
        if let Some(l2) = state.lambda2 {
            state.ft_calls += 1;
            if oracle(l2)? {
                return Err(Error::NonMonotoneOracle(format!(
                    "value {l2} was infeasible and is now feasible"
                )));
            }
        }
    }
    Ok(state)
}
