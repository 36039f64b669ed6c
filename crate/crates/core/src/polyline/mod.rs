//! Non-increasing step functions over non-negative integer distances.
//!
//! A polyline stores `value_at_zero` plus breakpoints `(key, value)` with
//! strictly increasing keys. For `t >= 1`, `F(t)` is the value of the greatest
//! breakpoint with key `< t` (or `value_at_zero` if there is none), so a
//! breakpoint at `a` governs `(a, next]`. Adjacent breakpoints never carry
//! equal values; every operation coalesces the boundaries it touches.
//!
//! Polylines live in a shared [`PolylineStore`] and are addressed through
//! move-only [`Polyline`] handles.

mod avl;
mod ops;

use avl::{Arena, NIL};

use crate::error::{Error, Result};

/// Raise `F(t)` by `delta` for `t` in `(lo, hi]`; `hi = None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Increase {
    pub lo: u64,
    pub hi: Option<u64>,
    pub delta: u64,
}

/// Remove all breakpoints with keys strictly inside `(lo, hi)`; `None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo: Option<u64>,
    pub hi: Option<u64>,
}

/// Breakpoint created or raised by an increase whose value now exceeds its
/// predecessor's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rise {
    pub key: u64,
    pub value: u64,
}

/// Handle to a polyline inside a [`PolylineStore`]. Not `Clone`: every
/// structural operation consumes or mutates it.
#[derive(Debug)]
pub struct Polyline {
    root: u32,
    value_at_zero: u64,
}

impl Polyline {
    pub fn value_at_zero(&self) -> u64 {
        self.value_at_zero
    }

    pub fn set_value_at_zero(&mut self, v: u64) {
        self.value_at_zero = v;
    }
}

/// Arena shared by any number of polylines.
#[derive(Debug, Default)]
pub struct PolylineStore {
    arena: Arena,
}

pub(crate) fn polyline_err(msg: impl Into<String>) -> Error {
    Error::Polyline(msg.into())
}

pub(crate) fn validate_increases(batch: &[Increase]) -> Result<()> {
    for (i, inc) in batch.iter().enumerate() {
        match inc.hi {
            Some(hi) if hi <= inc.lo => {
                return Err(polyline_err(format!("increase {i}: empty interval ({}, {hi}]", inc.lo)))
            }
            None if i + 1 != batch.len() => {
                return Err(polyline_err("only the last increase may be unbounded"))
            }
            _ => {}
        }
        if let Some(next) = batch.get(i + 1) {
            if inc.hi.is_some_and(|hi| hi > next.lo) {
                return Err(polyline_err("increase intervals must be sorted and disjoint"));
            }
        }
    }
    Ok(())
}

pub(crate) fn validate_deletes(batch: &[OpenInterval]) -> Result<()> {
    for (i, iv) in batch.iter().enumerate() {
        if iv.lo.is_none() && i != 0 {
            return Err(polyline_err("only the first delete interval may be unbounded below"));
        }
        if iv.hi.is_none() && i + 1 != batch.len() {
            return Err(polyline_err("only the last delete interval may be unbounded above"));
        }
        if let (Some(lo), Some(hi)) = (iv.lo, iv.hi) {
            if lo >= hi {
                return Err(polyline_err(format!("delete {i}: reversed interval ({lo}, {hi})")));
            }
        }
        if let Some(next) = batch.get(i + 1) {
            if let (Some(hi), Some(lo)) = (iv.hi, next.lo) {
                if hi > lo + 1 {
                    return Err(polyline_err("delete intervals must be sorted and disjoint"));
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn validate_sorted_keys<T>(batch: &[(u64, T)]) -> Result<()> {
    if batch.windows(2).any(|w| w[0].0 > w[1].0) {
        return Err(polyline_err("batch keys must be sorted"));
    }
    Ok(())
}

/// Checks the breakpoints of one inserted list: non-empty, increasing keys,
/// strictly decreasing values.
pub(crate) fn validate_insert_list(list: &[(u64, u64)]) -> Result<()> {
    if list.is_empty() {
        return Err(polyline_err("empty insert list"));
    }
    if list.windows(2).any(|w| w[0].0 >= w[1].0 || w[0].1 <= w[1].1) {
        return Err(polyline_err("insert list must have increasing keys and decreasing values"));
    }
    Ok(())
}

pub(crate) fn validate_breakpoints(bps: &[(u64, u64)]) -> Result<()> {
    if bps.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(polyline_err("breakpoint keys must be strictly increasing"));
    }
    if bps.windows(2).any(|w| w[0].1 == w[1].1) {
        return Err(polyline_err("adjacent breakpoints carry equal values"));
    }
    Ok(())
}

impl PolylineStore {
    pub fn new() -> PolylineStore {
        PolylineStore::default()
    }

    /// Node visits (pushes, rebalances, builds) since creation or the last reset.
    pub fn touches(&self) -> u64 {
        self.arena.touches
    }

    pub fn reset_touches(&mut self) {
        self.arena.touches = 0;
    }

    /// `F(0) = w`, `F(t) = 0` for `t >= 1`: the function of a single node of weight `w`.
    pub fn leaf(&mut self, w: u64) -> Polyline {
        let root = self.arena.alloc(0, 0);
        Polyline {
            root,
            value_at_zero: w,
        }
    }

    pub fn from_breakpoints(&mut self, value_at_zero: u64, bps: &[(u64, u64)]) -> Result<Polyline> {
        validate_breakpoints(bps)?;
        Ok(Polyline {
            root: self.arena.build(bps),
            value_at_zero,
        })
    }

    pub fn empty(&mut self, value_at_zero: u64) -> Polyline {
        Polyline {
            root: NIL,
            value_at_zero,
        }
    }

    /// Releases the polyline's nodes for reuse.
    pub fn free(&mut self, p: Polyline) {
        self.arena.discard(p.root);
    }

    pub fn len(&self, p: &Polyline) -> usize {
        self.arena.count(p.root)
    }

    pub fn is_empty(&self, p: &Polyline) -> bool {
        p.root == NIL
    }

    pub fn first(&mut self, p: &Polyline) -> Option<(u64, u64)> {
        self.arena.first(p.root)
    }

    pub fn last(&mut self, p: &Polyline) -> Option<(u64, u64)> {
        self.arena.last(p.root)
    }

    /// `F(t)`.
    pub fn query(&mut self, p: &Polyline, t: u64) -> u64 {
        if t == 0 {
            return p.value_at_zero;
        }
        self.arena.predecessor(p.root, t).map_or(p.value_at_zero, |(_, v)| v)
    }

    pub fn to_sorted_list(&mut self, p: &Polyline) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.len(p));
        self.arena.collect(p.root, &mut out);
        out
    }

    /// Moves the breakpoints with keys `> key` into a new polyline; both halves
    /// keep `value_at_zero`.
    pub fn split_off(&mut self, p: &mut Polyline, key: u64) -> Polyline {
        let (l, r) = match key.checked_add(1) {
            Some(k) => self.arena.split(p.root, k),
            None => (p.root, NIL),
        };
        p.root = l;
        Polyline {
            root: r,
            value_at_zero: p.value_at_zero,
        }
    }

    /// Appends `right` to `p`. Every key of `right` must exceed every key of
    /// `p`, and the last value of `p` must exceed the first value of `right`.
    /// On error both inputs are left untouched.
    pub fn append(&mut self, p: &mut Polyline, right: &mut Polyline) -> Result<()> {
        if let (Some(a), Some(b)) = (self.arena.last(p.root), self.arena.first(right.root)) {
            if a.0 >= b.0 {
                return Err(polyline_err(format!("join: key {} not below {}", a.0, b.0)));
            }
            if a.1 <= b.1 {
                return Err(polyline_err(format!("join: value {} not above {}", a.1, b.1)));
            }
        }
        p.root = self.arena.join2(p.root, right.root);
        right.root = NIL;
        Ok(())
    }

    /// Adds `e` to every key and re-establishes a breakpoint at key 0 that
    /// carries the old `value_at_zero` over `(0, e]`. A shift by zero is a no-op.
    pub fn shift(&mut self, p: &mut Polyline, e: u64) {
        if e == 0 || p.root == NIL {
            return;
        }
        let (rest, first) = self.arena.split_first(p.root);
        let (_, c) = self.arena.entry(first);
        self.arena.apply(rest, e, 0);
        if c == p.value_at_zero {
            // The first breakpoint would repeat value_at_zero: it moves to key 0.
            self.arena.discard(first);
            let zero = self.arena.alloc(0, c);
            p.root = self.arena.join3(NIL, zero, rest);
        } else {
            self.arena.apply(first, e, 0);
            let zero = self.arena.alloc(0, p.value_at_zero);
            p.root = self.arena.join3(NIL, first, rest);
            p.root = self.arena.join3(NIL, zero, p.root);
        }
    }

    pub(crate) fn pop_first(&mut self, p: &mut Polyline) -> Option<(u64, u64)> {
        if p.root == NIL {
            return None;
        }
        let (rest, node) = self.arena.split_first(p.root);
        let e = self.arena.entry(node);
        self.arena.discard(node);
        p.root = rest;
        Some(e)
    }

    /// Prepends a breakpoint below every existing key; the caller keeps the
    /// value order.
    pub(crate) fn push_front(&mut self, p: &mut Polyline, key: u64, val: u64) {
        let node = self.arena.alloc(key, val);
        p.root = self.arena.join3(NIL, node, p.root);
    }

    /// [`PolylineStore::append`] without the checks.
    pub(crate) fn concat(&mut self, p: &mut Polyline, right: Polyline) {
        p.root = self.arena.join2(p.root, right.root);
    }

    #[cfg(test)]
    pub(crate) fn check_balance(&mut self, p: &Polyline) {
        self.arena.check_avl(p.root);
    }
}
