//! Batched operations. Each one splits the tree at the batch's boundary keys,
//! works on the pieces, and joins them back, so a batch of size x on a
//! polyline of size y costs O(x log(2y/x)) plus the per-piece work.

use super::avl::NIL;
use super::{
    polyline_err, validate_deletes, validate_increases, validate_insert_list, validate_sorted_keys,
    Increase, OpenInterval, Polyline, PolylineStore, Rise,
};
use crate::error::{Error, Result};

/// `(predecessor, successor)` pair returned by the enriched value-predecessor query.
pub(crate) type PredSucc = (Option<(u64, u64)>, Option<(u64, u64)>);

impl PolylineStore {
    fn push_unique(keys: &mut Vec<u64>, k: u64) -> usize {
        if keys.last() != Some(&k) {
            keys.push(k);
        }
        keys.len() - 1
    }

    /// Ensures piece `j + 1` starts with a breakpoint at `keys[j]`, valued by
    /// the function just to the right of the key.
    fn materialize(&mut self, pieces: &mut [u32], keys: &[u64], value_at_zero: u64) {
        let a = &mut self.arena;
        let mut carry = a.last(pieces[0]).map_or(value_at_zero, |e| e.1);
        for (j, &k) in keys.iter().enumerate() {
            let piece = pieces[j + 1];
            if a.first(piece).map(|e| e.0) != Some(k) {
                let node = a.alloc(k, carry);
                pieces[j + 1] = a.join3(NIL, node, piece);
            }
            carry = a.last(pieces[j + 1]).expect("materialized").1;
        }
    }

    fn drop_first(&mut self, piece: u32) -> u32 {
        let (rest, node) = self.arena.split_first(piece);
        self.arena.discard(node);
        rest
    }

    /// Adds `delta` to `F` on each `(lo, hi]` of the batch (sorted, disjoint).
    /// Breakpoints are materialized at every interval end. Returns the
    /// interval-end breakpoints that now exceed their predecessor.
    pub fn batched_interval_increase(&mut self, p: &mut Polyline, batch: &[Increase]) -> Result<Vec<Rise>> {
        validate_increases(batch)?;
        let Some(max_delta) = batch.iter().map(|i| i.delta).max() else {
            return Ok(Vec::new());
        };
        let top = self.arena.max_val(p.root).unwrap_or(0).max(p.value_at_zero);
        if top.checked_add(max_delta).is_none() {
            return Err(Error::WeightOverflow);
        }
        let mut keys = Vec::with_capacity(2 * batch.len());
        let mut ranges = Vec::with_capacity(batch.len());
        for inc in batch {
            let start = Self::push_unique(&mut keys, inc.lo) + 1;
            let end = inc.hi.map(|hi| Self::push_unique(&mut keys, hi));
            ranges.push((start, end, inc.delta));
        }
        let mut pieces = Vec::with_capacity(keys.len() + 1);
        self.arena.split_many(p.root, &keys, &mut pieces);
        self.materialize(&mut pieces, &keys, p.value_at_zero);
        for &(start, end, delta) in &ranges {
            for &piece in &pieces[start..=end.unwrap_or(keys.len())] {
                self.arena.apply(piece, 0, delta);
            }
        }
        let mut rises = Vec::new();
        let mut marked = Vec::new();
        let mut prev = self.arena.last(pieces[0]).map(|e| e.1);
        for j in 0..keys.len() {
            let (k, f) = self.arena.first(pieces[j + 1]).expect("materialized");
            match prev {
                Some(pv) if pv == f => marked.push(j + 1),
                Some(pv) if f > pv => rises.push(Rise { key: k, value: f }),
                _ => {}
            }
            prev = self.arena.last(pieces[j + 1]).map(|e| e.1);
        }
        for j in marked {
            pieces[j] = self.drop_first(pieces[j]);
        }
        p.root = self.arena.join_many(&pieces);
        Ok(rises)
    }

    /// For each `(k, v)` (sorted by `k`): the largest key `< k` whose value is
    /// `>= v`.
    pub fn batched_value_predecessor(&mut self, p: &mut Polyline, batch: &[(u64, u64)]) -> Result<Vec<Option<u64>>> {
        Ok(self
            .value_predecessors_full(p, batch)?
            .into_iter()
            .map(|(pred, _)| pred.map(|e| e.0))
            .collect())
    }

    /// Like [`PolylineStore::batched_value_predecessor`] but also returns the
    /// breakpoint right after the predecessor (the first breakpoint if there is
    /// no predecessor).
    pub(crate) fn value_predecessors_full(&mut self, p: &mut Polyline, batch: &[(u64, u64)]) -> Result<Vec<PredSucc>> {
        validate_sorted_keys(batch)?;
        if batch.is_empty() {
            return Ok(Vec::new());
        }
        let keys: Vec<u64> = batch.iter().map(|e| e.0).collect();
        let mut pieces = Vec::with_capacity(keys.len() + 1);
        self.arena.split_many(p.root, &keys, &mut pieces);
        let a = &mut self.arena;
        let mut next_nonempty = vec![usize::MAX; pieces.len() + 1];
        for j in (0..pieces.len()).rev() {
            next_nonempty[j] = if pieces[j] != NIL { j } else { next_nonempty[j + 1] };
        }
        let first_of = |a: &mut super::avl::Arena, from: usize| -> Option<(u64, u64)> {
            match next_nonempty[from] {
                usize::MAX => None,
                j => a.first(pieces[j]),
            }
        };
        // Stack of piece indices with strictly decreasing max values: the last
        // piece `<= i` reaching `v` is always on it.
        let mut stack: Vec<(usize, u64)> = Vec::new();
        let mut out = Vec::with_capacity(batch.len());
        for (i, &(_, v)) in batch.iter().enumerate() {
            if let Some(m) = a.max_val(pieces[i]) {
                while stack.last().is_some_and(|&(_, top)| top <= m) {
                    stack.pop();
                }
                stack.push((i, m));
            }
            let pos = stack.partition_point(|&(_, m)| m >= v);
            if pos == 0 {
                out.push((None, first_of(a, 0)));
                continue;
            }
            let j = stack[pos - 1].0;
            let (pred, succ) = a.rightmost_at_least(pieces[j], v).expect("piece max reaches v");
            let succ = match succ {
                Some(s) => Some(s),
                None => first_of(a, j + 1),
            };
            out.push((Some(pred), succ));
        }
        p.root = a.join_many(&pieces);
        Ok(out)
    }

    /// `F(t)` for every `t` of a sorted batch.
    pub fn batched_query(&mut self, p: &mut Polyline, ts: &[u64]) -> Result<Vec<u64>> {
        if ts.windows(2).any(|w| w[0] > w[1]) {
            return Err(polyline_err("query keys must be sorted"));
        }
        let mut pieces = Vec::with_capacity(ts.len() + 1);
        self.arena.split_many(p.root, ts, &mut pieces);
        let mut carry = p.value_at_zero;
        let mut out = Vec::with_capacity(ts.len());
        for (i, &t) in ts.iter().enumerate() {
            if let Some((_, v)) = self.arena.last(pieces[i]) {
                carry = v;
            }
            out.push(if t == 0 { p.value_at_zero } else { carry });
        }
        p.root = self.arena.join_many(&pieces);
        Ok(out)
    }

    /// Inserts each list into a distinct gap between existing breakpoints.
    /// The lists must keep keys increasing and values strictly decreasing
    /// relative to their neighbours. On error the polyline is unchanged.
    pub fn batched_interval_insert(&mut self, p: &mut Polyline, lists: Vec<Vec<(u64, u64)>>) -> Result<()> {
        for (i, list) in lists.iter().enumerate() {
            validate_insert_list(list)?;
            if let Some(next) = lists.get(i + 1) {
                if list.last().unwrap().0 >= next[0].0 {
                    return Err(polyline_err("insert lists must be sorted and disjoint"));
                }
            }
        }
        if lists.is_empty() {
            return Ok(());
        }
        let keys: Vec<u64> = lists.iter().map(|l| l[0].0).collect();
        let mut pieces = Vec::with_capacity(keys.len() + 1);
        self.arena.split_many(p.root, &keys, &mut pieces);
        let mut check = || -> Result<()> {
            let a = &mut self.arena;
            let mut prev = a.last(pieces[0]);
            for (i, list) in lists.iter().enumerate() {
                let (lo, hi) = (list[0], *list.last().unwrap());
                if let Some((_, pv)) = prev {
                    if pv <= lo.1 {
                        return Err(polyline_err(format!("insert at {}: value not below predecessor", lo.0)));
                    }
                }
                match a.first(pieces[i + 1]) {
                    Some((k, v)) => {
                        if k <= hi.0 {
                            return Err(polyline_err(format!("insert at {}: collides with key {k}", lo.0)));
                        }
                        if hi.1 <= v {
                            return Err(polyline_err(format!("insert at {}: value not above successor", hi.0)));
                        }
                    }
                    None if i + 1 < lists.len() => {
                        return Err(polyline_err("two insert lists share a gap"));
                    }
                    None => {}
                }
                prev = a.last(pieces[i + 1]);
            }
            Ok(())
        };
        if let Err(e) = check() {
            p.root = self.arena.join_many(&pieces);
            return Err(e);
        }
        let mut all = Vec::with_capacity(2 * pieces.len());
        all.push(pieces[0]);
        for (i, list) in lists.iter().enumerate() {
            all.push(self.arena.build(list));
            all.push(pieces[i + 1]);
        }
        p.root = self.arena.join_many(&all);
        Ok(())
    }

    /// Removes the breakpoints strictly inside each interval, then drops the
    /// first breakpoint at or after each upper end if it now repeats its
    /// predecessor's value.
    pub fn batched_interval_delete(&mut self, p: &mut Polyline, batch: &[OpenInterval]) -> Result<()> {
        validate_deletes(batch)?;
        let mut keys = Vec::with_capacity(2 * batch.len());
        // (first dropped piece, last dropped piece or None for the tail, piece after)
        let mut spans = Vec::with_capacity(batch.len());
        for iv in batch {
            let a = iv.lo.map(|lo| lo + 1);
            if let (Some(a), Some(b)) = (a, iv.hi) {
                if a >= b {
                    continue;
                }
            }
            let start = a.map_or(0, |a| Self::push_unique(&mut keys, a) + 1);
            match iv.hi {
                Some(b) => {
                    let jb = Self::push_unique(&mut keys, b);
                    spans.push((start, Some(jb), Some(jb + 1)));
                }
                None => spans.push((start, None, None)),
            }
        }
        if spans.is_empty() {
            return Ok(());
        }
        let mut pieces = Vec::with_capacity(keys.len() + 1);
        self.arena.split_many(p.root, &keys, &mut pieces);
        for &(start, end, _) in &spans {
            for piece in &mut pieces[start..=end.unwrap_or(keys.len())] {
                self.arena.discard(*piece);
                *piece = NIL;
            }
        }
        // last_before[j]: value of the last breakpoint in pieces[..j].
        let mut last_before = vec![None; pieces.len() + 1];
        for j in 0..pieces.len() {
            last_before[j + 1] = self.arena.last(pieces[j]).map(|e| e.1).or(last_before[j]);
        }
        let mut marked = Vec::new();
        for &(_, _, after) in &spans {
            let Some(mut j) = after else { continue };
            while j < pieces.len() && pieces[j] == NIL {
                j += 1;
            }
            if j == pieces.len() || marked.last() == Some(&j) {
                continue;
            }
            let f = self.arena.first(pieces[j]).unwrap().1;
            if last_before[j] == Some(f) {
                marked.push(j);
            }
        }
        for j in marked {
            pieces[j] = self.drop_first(pieces[j]);
        }
        p.root = self.arena.join_many(&pieces);
        Ok(())
    }

    /// Replaces `F` by `max(F, A)` where `A(t) = alpha_j` on `(k_j, k_{j+1}]`
    /// for `steps = [(k_0 = 0, alpha_0), (k_1, alpha_1), ...]`, the last step
    /// unbounded. Both `F` and `A` must be non-increasing.
    pub(crate) fn raise_to_steps(&mut self, p: &mut Polyline, steps: &[(u64, u64)]) {
        if steps.is_empty() {
            return;
        }
        debug_assert!(steps.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 >= w[1].1));
        let keys: Vec<u64> = steps.iter().map(|s| s.0).collect();
        let mut pieces = Vec::with_capacity(keys.len() + 1);
        self.arena.split_many(p.root, &keys, &mut pieces);
        self.materialize(&mut pieces, &keys, p.value_at_zero);
        let a = &mut self.arena;
        for (j, &(k, alpha)) in steps.iter().enumerate() {
            let piece = pieces[j + 1];
            let f = a.first(piece).unwrap().1;
            if f <= alpha {
                a.discard(piece);
                pieces[j + 1] = a.alloc(k, alpha);
                continue;
            }
            let ((_, xv), succ) = a.rightmost_at_least(piece, alpha).unwrap();
            if let Some((sk, _)) = succ {
                let (left, right) = a.split(piece, sk);
                a.discard(right);
                pieces[j + 1] = if xv == alpha {
                    left
                } else {
                    let node = a.alloc(sk, alpha);
                    a.join3(left, node, NIL)
                };
            }
        }
        let mut marked = Vec::new();
        let mut prev = a.last(pieces[0]).map(|e| e.1);
        for j in 1..pieces.len() {
            if prev == a.first(pieces[j]).map(|e| e.1) {
                marked.push(j);
            }
            prev = a.last(pieces[j]).map(|e| e.1);
        }
        for j in marked {
            pieces[j] = self.drop_first(pieces[j]);
        }
        p.root = self.arena.join_many(&pieces);
    }
}
