//! Vector-backed polyline with the same operation semantics as
//! [`crate::polyline::PolylineStore`], written for obviousness over speed.

use crate::error::{Error, Result};
use crate::polyline::{
    polyline_err, validate_breakpoints, validate_deletes, validate_increases, validate_insert_list,
    validate_sorted_keys, Increase, OpenInterval, Rise,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaivePolyline {
    pub value_at_zero: u64,
    pub bps: Vec<(u64, u64)>,
}

impl NaivePolyline {
    pub fn new(value_at_zero: u64, bps: Vec<(u64, u64)>) -> Result<NaivePolyline> {
        validate_breakpoints(&bps)?;
        Ok(NaivePolyline { value_at_zero, bps })
    }

    pub fn leaf(w: u64) -> NaivePolyline {
        NaivePolyline {
            value_at_zero: w,
            bps: vec![(0, 0)],
        }
    }

    pub fn query(&self, t: u64) -> u64 {
        if t == 0 {
            return self.value_at_zero;
        }
        self.bps
            .iter()
            .rev()
            .find(|e| e.0 < t)
            .map_or(self.value_at_zero, |e| e.1)
    }

    pub fn split(&self, key: u64) -> (NaivePolyline, NaivePolyline) {
        let (l, r): (Vec<_>, Vec<_>) = self.bps.iter().partition(|e| e.0 <= key);
        (
            NaivePolyline { value_at_zero: self.value_at_zero, bps: l },
            NaivePolyline { value_at_zero: self.value_at_zero, bps: r },
        )
    }

    pub fn join(&self, right: &NaivePolyline) -> Result<NaivePolyline> {
        if let (Some(a), Some(b)) = (self.bps.last(), right.bps.first()) {
            if a.0 >= b.0 || a.1 <= b.1 {
                return Err(polyline_err("join: order or monotonicity violated"));
            }
        }
        let mut bps = self.bps.clone();
        bps.extend_from_slice(&right.bps);
        Ok(NaivePolyline { value_at_zero: self.value_at_zero, bps })
    }

    pub fn shift(&mut self, e: u64) {
        if e == 0 || self.bps.is_empty() {
            return;
        }
        for b in &mut self.bps {
            b.0 += e;
        }
        self.bps.insert(0, (0, self.value_at_zero));
        if self.bps[1].1 == self.bps[0].1 {
            self.bps.remove(1);
        }
    }

    /// Drops every breakpoint in `candidates` whose value repeats the one
    /// before it, judged on the current sequence before any removal.
    fn coalesce(&mut self, candidates: &[u64]) {
        let mut drop = vec![false; self.bps.len()];
        for i in 1..self.bps.len() {
            if self.bps[i].1 == self.bps[i - 1].1 && candidates.contains(&self.bps[i].0) {
                drop[i] = true;
            }
        }
        let mut i = 0;
        self.bps.retain(|_| {
            i += 1;
            !drop[i - 1]
        });
    }

    fn materialize(&mut self, k: u64) {
        if let Err(pos) = self.bps.binary_search_by_key(&k, |e| e.0) {
            let v = self.query(k + 1);
            self.bps.insert(pos, (k, v));
        }
    }

    pub fn batched_interval_increase(&mut self, batch: &[Increase]) -> Result<Vec<Rise>> {
        validate_increases(batch)?;
        let top = self.bps.iter().map(|e| e.1).max().unwrap_or(0).max(self.value_at_zero);
        if let Some(d) = batch.iter().map(|i| i.delta).max() {
            top.checked_add(d).ok_or(Error::WeightOverflow)?;
        }
        let mut bounds = Vec::new();
        for inc in batch {
            bounds.push(inc.lo);
            bounds.extend(inc.hi);
        }
        for &k in &bounds {
            self.materialize(k);
        }
        for inc in batch {
            for b in &mut self.bps {
                if b.0 >= inc.lo && inc.hi.is_none_or(|hi| b.0 < hi) {
                    b.1 += inc.delta;
                }
            }
        }
        let mut rises = Vec::new();
        for i in 1..self.bps.len() {
            let (k, v) = self.bps[i];
            if bounds.contains(&k) && v > self.bps[i - 1].1 {
                rises.push(Rise { key: k, value: v });
            }
        }
        self.coalesce(&bounds);
        Ok(rises)
    }

    pub fn batched_value_predecessor(&self, batch: &[(u64, u64)]) -> Result<Vec<Option<u64>>> {
        validate_sorted_keys(batch)?;
        Ok(batch
            .iter()
            .map(|&(k, v)| self.bps.iter().rev().find(|e| e.0 < k && e.1 >= v).map(|e| e.0))
            .collect())
    }

    pub fn batched_interval_insert(&mut self, lists: Vec<Vec<(u64, u64)>>) -> Result<()> {
        let mut gaps = Vec::new();
        for (i, list) in lists.iter().enumerate() {
            validate_insert_list(list)?;
            if lists.get(i + 1).is_some_and(|next| list.last().unwrap().0 >= next[0].0) {
                return Err(polyline_err("insert lists must be sorted and disjoint"));
            }
            let (lo, hi) = (list[0], *list.last().unwrap());
            let gap = self.bps.partition_point(|e| e.0 < lo.0);
            if let Some(next) = self.bps.get(gap) {
                if next.0 <= hi.0 {
                    return Err(polyline_err("insert collides with an existing key"));
                }
                if hi.1 <= next.1 {
                    return Err(polyline_err("insert value not above successor"));
                }
            }
            if gap > 0 && self.bps[gap - 1].1 <= lo.1 {
                return Err(polyline_err("insert value not below predecessor"));
            }
            if gaps.last() == Some(&gap) {
                return Err(polyline_err("two insert lists share a gap"));
            }
            gaps.push(gap);
        }
        for list in lists {
            self.bps.extend(list);
        }
        self.bps.sort_unstable();
        Ok(())
    }

    pub fn batched_interval_delete(&mut self, batch: &[OpenInterval]) -> Result<()> {
        validate_deletes(batch)?;
        let inside = |k: u64, iv: &OpenInterval| iv.lo.is_none_or(|lo| k > lo) && iv.hi.is_none_or(|hi| k < hi);
        self.bps.retain(|e| !batch.iter().any(|iv| inside(e.0, iv)));
        let mut targets = Vec::new();
        for iv in batch {
            let Some(hi) = iv.hi else { continue };
            if iv.lo.is_some_and(|lo| lo + 1 >= hi) {
                continue;
            }
            if let Some(e) = self.bps.iter().find(|e| e.0 >= hi) {
                targets.push(e.0);
            }
        }
        self.coalesce(&targets);
        Ok(())
    }

    /// Non-increasing and normalized: first key 0, values strictly decreasing.
    pub fn is_normalized(&self) -> bool {
        self.bps.first().is_some_and(|e| e.0 == 0 && e.1 <= self.value_at_zero)
            && self.bps.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1)
    }
}
