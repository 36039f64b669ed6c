//! Weighted dispersion: the polyline-merging feasibility test, the optimizer
//! built on it, and the set-disjointness instance generator.
//!
//! For a subtree rooted at `v`, `F_v(t)` is the largest total weight of a set
//! with pairwise distances `>= λ` whose nodes all lie at distance `>= t` from
//! `v`. Children's functions are shifted by their edge length and merged
//! pairwise; the answer is `F_root(0)`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{centroid_matrices, parametric_search, SearchOptions};
use crate::oracle;
use crate::polyline::{Increase, OpenInterval, Polyline, PolylineStore};
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedAnswer {
    pub max_weight: u64,
    pub feasible: bool,
    /// Set by [`weighted_optimize`] only.
    pub lambda_star: Option<u64>,
    pub witness: Option<Vec<NodeId>>,
    pub ft_calls: u64,
    /// Polyline node touches over all tests run.
    pub touches: u64,
    /// Largest touch count of a single test.
    pub max_test_touches: u64,
    /// Two-polyline merges over all tests run.
    pub merges: u64,
    pub n: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TestStats {
    pub touches: u64,
    pub merges: u64,
}

fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::WeightOverflow)
}

/// Value of a breakpoint list at `t`.
fn eval(value_at_zero: u64, bps: &[(u64, u64)], t: u64) -> u64 {
    if t == 0 {
        return value_at_zero;
    }
    let i = bps.partition_point(|e| e.0 < t);
    if i == 0 {
        value_at_zero
    } else {
        bps[i - 1].1
    }
}

/// `H(t) = max { G1(a) + G2(b) : a, b >= t, a + b >= λ }`, consuming both.
/// `small` must not have more breakpoints than `big`.
fn merge(s: &mut PolylineStore, small: Polyline, mut big: Polyline, lambda: u64) -> Result<Polyline> {
    assert!(s.len(&small) <= s.len(&big), "merge must iterate the smaller polyline");
    let l1 = s.to_sorted_list(&small);
    let vz1 = small.value_at_zero();
    s.free(small);
    let vz2 = big.value_at_zero();
    let cross = add(vz1, s.query(&big, lambda))?.max(add(eval(vz1, &l1, lambda), vz2)?);
    let q = lambda / 2;

    // Second half, t > q: a = b = t already satisfies a + b >= λ.
    let split = l1.partition_point(|e| e.0 <= q);
    let mut second = Vec::with_capacity(l1.len() - split + 1);
    let c_q = if split == 0 { vz1 } else { l1[split - 1].1 };
    let mut lo = q;
    let mut delta = c_q;
    for &(k, c) in &l1[split..] {
        second.push(Increase { lo, hi: Some(k), delta });
        lo = k;
        delta = c;
    }
    second.push(Increase { lo, hi: None, delta });

    let mut h = if q == 0 {
        s.batched_interval_increase(&mut big, &second)?;
        big
    } else {
        // Case I: a <= q taken from the small side, b = λ - a from the big side.
        let first: Vec<(u64, u64)> = l1.iter().copied().filter(|e| e.0 < q).collect();
        let ends: Vec<u64> = (0..first.len())
            .map(|j| first.get(j + 1).map_or(q, |e| e.0.min(q)))
            .collect();
        let keys: Vec<u64> = ends.iter().rev().map(|&r| lambda - r).collect();
        let vals = s.batched_query(&mut big, &keys)?;
        let mut alpha = vec![0u64; first.len()];
        let mut best = 0;
        for j in (0..first.len()).rev() {
            best = best.max(add(first[j].1, vals[first.len() - 1 - j])?);
            alpha[j] = best;
        }
        let mut steps: Vec<(u64, u64)> = Vec::with_capacity(first.len());
        for (j, &(k, _)) in first.iter().enumerate() {
            if steps.last().is_none_or(|e| e.1 != alpha[j]) {
                steps.push((k, alpha[j]));
            }
        }

        let mut hi = s.split_off(&mut big, q - 1);
        let mut low = big;
        if s.first(&hi).map(|e| e.0) != Some(q) {
            let v = s.last(&low).expect("key 0 is below q").1;
            s.push_front(&mut hi, q, v);
        }

        // Case II: b <= q on the big side, a = λ - b from the small side.
        // G1(λ - b) = c_j exactly for b in (λ - k_{j+1} - 1, λ - k_j - 1].
        let mut incs = Vec::new();
        for j in (0..l1.len()).rev() {
            let (k, c) = l1[j];
            let b_lo = l1.get(j + 1).map_or(0, |e| lambda.saturating_sub(e.0 + 1));
            let b_hi = lambda.saturating_sub(k + 1).min(q);
            if b_lo < b_hi {
                let hi = if b_hi == q { None } else { Some(b_hi) };
                incs.push(Increase { lo: b_lo, hi, delta: c });
            }
        }
        let rises = s.batched_interval_increase(&mut low, &incs)?;
        // Suffix maximum: flatten everything a later rise dominates.
        let mut kept = Vec::with_capacity(rises.len());
        let mut top = 0;
        for r in rises.iter().rev() {
            if r.value >= top {
                top = r.value;
                kept.push((r.key, r.value));
            }
        }
        kept.reverse();
        let found = s.value_predecessors_full(&mut low, &kept)?;
        let mut raise = Vec::with_capacity(kept.len());
        let mut drop = Vec::with_capacity(kept.len());
        for (&(key, w), (_, succ)) in kept.iter().zip(found) {
            let (sk, sv) = succ.expect("a polyline with a rise has a first breakpoint");
            if sk == key {
                continue;
            }
            raise.push(Increase { lo: sk, hi: Some(key), delta: w - sv });
            drop.push(OpenInterval { lo: Some(sk), hi: Some(key + 1) });
        }
        s.batched_interval_increase(&mut low, &raise)?;
        s.batched_interval_delete(&mut low, &drop)?;
        s.raise_to_steps(&mut low, &steps);

        s.batched_interval_increase(&mut hi, &second)?;
        if s.last(&low).map(|e| e.1) == s.first(&hi).map(|e| e.1) {
            s.pop_first(&mut hi);
        }
        s.concat(&mut low, hi);
        low
    };
    let h1 = s.first(&h).expect("merged polyline keeps key 0").1;
    h.set_value_at_zero(h1.max(cross));
    Ok(h)
}

/// Maximum total weight of a set of selectable nodes with pairwise distances
/// `>= lambda`, in O(n log n).
pub fn max_weight(tree: &Tree, lambda: u64) -> Result<(u64, TestStats)> {
    tree.total_weight()?;
    let mut s = PolylineStore::new();
    let sizes = tree.subtree_sizes();
    let mut polys: Vec<Option<Polyline>> = (0..tree.len()).map(|_| None).collect();
    let mut merges = 0;
    for &v in tree.bfs_order().iter().rev() {
        let mut acc: Option<Polyline> = None;
        for &c in tree.children(v) {
            let mut g = polys[c].take().expect("children first");
            s.shift(&mut g, tree.edge_len(c));
            acc = Some(match acc {
                None => g,
                Some(a) => {
                    merges += 1;
                    if s.len(&a) <= s.len(&g) {
                        merge(&mut s, a, g, lambda)?
                    } else {
                        merge(&mut s, g, a, lambda)?
                    }
                }
            });
        }
        let mut h = acc.unwrap_or_else(|| s.leaf(0));
        let mut best = h.value_at_zero();
        if tree.is_selectable(v) {
            best = best.max(add(tree.weight(v), s.query(&h, lambda))?);
        }
        h.set_value_at_zero(best);
        assert!(s.len(&h) <= sizes[v], "polyline larger than its subtree");
        polys[v] = Some(h);
    }
    let root = polys[tree.root()].take().unwrap();
    let stats = TestStats { touches: s.touches(), merges };
    Ok((root.value_at_zero(), stats))
}

pub fn weighted_feasibility(tree: &Tree, lambda: u64, min_weight: u64) -> Result<WeightedAnswer> {
    let start = Instant::now();
    let (mw, stats) = max_weight(tree, lambda)?;
    Ok(WeightedAnswer {
        max_weight: mw,
        feasible: mw >= min_weight,
        lambda_star: None,
        witness: None,
        ft_calls: 1,
        touches: stats.touches,
        max_test_touches: stats.touches,
        merges: stats.merges,
        n: tree.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Largest `λ` admitting a set of total weight `>= min_weight`.
///
/// Errors when the selectable weight is below `min_weight`, and when a single
/// node already reaches it (no pair constrains `λ`, so it is unbounded).
pub fn weighted_optimize(tree: &Tree, min_weight: u64) -> Result<WeightedAnswer> {
    let start = Instant::now();
    let total: u64 = (0..tree.len())
        .filter(|&v| tree.is_selectable(v))
        .try_fold(0u64, |acc, v| acc.checked_add(tree.weight(v)))
        .ok_or(Error::WeightOverflow)?;
    if min_weight > total {
        return Err(Error::InvalidArgument(format!(
            "min weight {min_weight} exceeds the total selectable weight {total}: infeasible at every λ"
        )));
    }
    let single = (0..tree.len())
        .filter(|&v| tree.is_selectable(v))
        .map(|v| tree.weight(v))
        .max()
        .unwrap_or(0);
    if single >= min_weight {
        return Err(Error::InvalidArgument(format!(
            "a single node already weighs {single} >= {min_weight}: λ is unbounded"
        )));
    }
    let (tree, _) = tree.relabel_bfs();
    let tree = &tree;
    let matrices = centroid_matrices(tree);
    let mut stats = TestStats::default();
    let mut peak = 0;
    let state = parametric_search(
        &matrices,
        |lambda| {
            let (mw, st) = max_weight(tree, lambda)?;
            stats.touches += st.touches;
            stats.merges += st.merges;
            peak = peak.max(st.touches);
            Ok(mw >= min_weight)
        },
        SearchOptions::default(),
    )?;
    let lambda_star = state.lambda1;
    let (mw, st) = max_weight(tree, lambda_star)?;
    Ok(WeightedAnswer {
        max_weight: mw,
        feasible: mw >= min_weight,
        lambda_star: Some(lambda_star),
        witness: None,
        ft_calls: state.ft_calls + 1,
        touches: stats.touches + st.touches,
        max_test_touches: peak.max(st.touches),
        merges: stats.merges + st.merges,
        n: tree.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// A maximum-weight set at `lambda`, found exhaustively. The polyline test
/// tracks weights only, so this is limited to small trees.
pub fn weighted_witness(tree: &Tree, lambda: u64) -> Result<Vec<NodeId>> {
    Ok(oracle::brute_weighted(tree, lambda)?.witness)
}

/// Weighted tree whose feasibility at `(lambda, min_weight)` says whether two
/// sets intersect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub tree: Tree,
    /// `2·max(X ∪ Y) + 3` after shifting to non-negative values.
    pub k: u64,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    /// Threshold to test at: `2K`, because lengths are doubled to keep `K/2` integral.
    pub lambda: u64,
    /// Weight bound to test with: `K`.
    pub min_weight: u64,
}

/// Builds the two-star instance: hubs `u = 0` and `v = 1` joined by an edge of
/// (doubled) length `K`; each `x` hangs off `u` at `K - 2x - 2` with weight
/// `x + 1`, each `y` hangs off `v` at `2y + 2` with weight `K - y - 1`. Only an
/// `x`/`y` pair with `x = y` is both far enough apart and heavy enough.
pub fn make_set_disjointness_instance(x: &[i64], y: &[i64]) -> Result<ReductionInstance> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidArgument("both sets must be non-empty".into()));
    }
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "sets must have equal size, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let min = *x.iter().chain(y).min().unwrap();
    let shift = |a: i64| -> Result<u64> {
        let v = (a as i128) - (min.min(0) as i128);
        u64::try_from(v).ok().filter(|&v| v <= 1 << 58).ok_or(Error::LengthOverflow)
    };
    let xs: Vec<u64> = x.iter().map(|&a| shift(a)).collect::<Result<_>>()?;
    let ys: Vec<u64> = y.iter().map(|&a| shift(a)).collect::<Result<_>>()?;
    let k = 2 * xs.iter().chain(&ys).max().unwrap() + 3;
    let m = xs.len();
    let mut edges = vec![(0, 1, k)];
    let mut weights = vec![0, 0];
    for (i, &a) in xs.iter().enumerate() {
        edges.push((0, 2 + i, k - 2 * a - 2));
        weights.push(a + 1);
    }
    for (i, &b) in ys.iter().enumerate() {
        edges.push((1, 2 + m + i, 2 * b + 2));
        weights.push(k - b - 1);
    }
    let tree = Tree::from_edges(2 * m + 2, &edges, 0, Some(&weights))?;
    Ok(ReductionInstance {
        tree,
        k,
        x: x.to_vec(),
        y: y.to_vec(),
        lambda: 2 * k,
        min_weight: k,
    })
}
