//! Arena-backed AVL trees with split/join, lazy key/value offsets and
//! max-value aggregates. Every breakpoint lives in a tree node.

pub(crate) const NIL: u32 = u32::MAX;

/// A `(key, value)` breakpoint.
type Bp = (u64, u64);

#[derive(Debug, Clone)]
struct Node {
    key: u64,
    val: u64,
    /// Pending offsets for both child subtrees (this node is already up to date).
    add_key: u64,
    add_val: u64,
    left: u32,
    right: u32,
    height: u32,
    count: u32,
    max_val: u64,
}

#[derive(Debug, Default)]
pub(crate) struct Arena {
    nodes: Vec<Node>,
    /// Roots of discarded subtrees; reclaimed one node at a time on allocation.
    graveyard: Vec<u32>,
    pub(crate) touches: u64,
}

impl Arena {
    pub(crate) fn alloc(&mut self, key: u64, val: u64) -> u32 {
        let fresh = Node {
            key,
            val,
            add_key: 0,
            add_val: 0,
            left: NIL,
            right: NIL,
            height: 1,
            count: 1,
            max_val: val,
        };
        if let Some(id) = self.graveyard.pop() {
            let (l, r) = (self.nodes[id as usize].left, self.nodes[id as usize].right);
            if l != NIL {
                self.graveyard.push(l);
            }
            if r != NIL {
                self.graveyard.push(r);
            }
            self.nodes[id as usize] = fresh;
            id
        } else {
            self.nodes.push(fresh);
            (self.nodes.len() - 1) as u32
        }
    }

    pub(crate) fn discard(&mut self, t: u32) {
        if t != NIL {
            self.graveyard.push(t);
        }
    }

    #[inline]
    pub(crate) fn height(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].height
        }
    }

    #[inline]
    pub(crate) fn count(&self, t: u32) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].count as usize
        }
    }

    /// Maximum value in the subtree; `None` when empty.
    #[inline]
    pub(crate) fn max_val(&self, t: u32) -> Option<u64> {
        if t == NIL {
            None
        } else {
            Some(self.nodes[t as usize].max_val)
        }
    }

    /// Adds `dk` to every key and `dv` to every value of the subtree in O(1).
    #[inline]
    pub(crate) fn apply(&mut self, t: u32, dk: u64, dv: u64) {
        if t == NIL {
            return;
        }
        let n = &mut self.nodes[t as usize];
        n.key += dk;
        n.val += dv;
        n.max_val += dv;
        n.add_key += dk;
        n.add_val += dv;
    }

    #[inline]
    fn push(&mut self, t: u32) {
        self.touches += 1;
        let n = &mut self.nodes[t as usize];
        let (dk, dv) = (n.add_key, n.add_val);
        if dk == 0 && dv == 0 {
            return;
        }
        n.add_key = 0;
        n.add_val = 0;
        let (l, r) = (n.left, n.right);
        self.apply(l, dk, dv);
        self.apply(r, dk, dv);
    }

    #[inline]
    fn update(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let height = 1 + self.height(l).max(self.height(r));
        let count = 1 + self.count(l) + self.count(r);
        let mut max_val = self.nodes[t as usize].val;
        if let Some(m) = self.max_val(l) {
            max_val = max_val.max(m);
        }
        if let Some(m) = self.max_val(r) {
            max_val = max_val.max(m);
        }
        let n = &mut self.nodes[t as usize];
        n.height = height;
        n.count = count as u32;
        n.max_val = max_val;
    }

    pub(crate) fn entry(&self, t: u32) -> (u64, u64) {
        let n = &self.nodes[t as usize];
        (n.key, n.val)
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        self.push(x);
        let y = self.nodes[x as usize].right;
        self.push(y);
        self.nodes[x as usize].right = self.nodes[y as usize].left;
        self.update(x);
        self.nodes[y as usize].left = x;
        self.update(y);
        y
    }

    fn rotate_right(&mut self, x: u32) -> u32 {
        self.push(x);
        let y = self.nodes[x as usize].left;
        self.push(y);
        self.nodes[x as usize].left = self.nodes[y as usize].right;
        self.update(x);
        self.nodes[y as usize].right = x;
        self.update(y);
        y
    }

    fn make(&mut self, l: u32, m: u32, r: u32) -> u32 {
        // `m` is either freshly pushed or detached; tags on a detached node
        // were meant for itself only.
        self.nodes[m as usize].add_key = 0;
        self.nodes[m as usize].add_val = 0;
        self.nodes[m as usize].left = l;
        self.nodes[m as usize].right = r;
        self.update(m);
        m
    }

    fn join_right(&mut self, l: u32, m: u32, r: u32) -> u32 {
        self.push(l);
        let (ll, c) = (self.nodes[l as usize].left, self.nodes[l as usize].right);
        if self.height(c) <= self.height(r) + 1 {
            let t = self.make(c, m, r);
            if self.height(t) <= self.height(ll) + 1 {
                self.make(ll, l, t)
            } else {
                let t = self.rotate_right(t);
                let u = self.make(ll, l, t);
                self.rotate_left(u)
            }
        } else {
            let t = self.join_right(c, m, r);
            let u = self.make(ll, l, t);
            if self.height(t) <= self.height(ll) + 1 {
                u
            } else {
                self.rotate_left(u)
            }
        }
    }

    fn join_left(&mut self, l: u32, m: u32, r: u32) -> u32 {
        self.push(r);
        let (c, rr) = (self.nodes[r as usize].left, self.nodes[r as usize].right);
        if self.height(c) <= self.height(l) + 1 {
            let t = self.make(l, m, c);
            if self.height(t) <= self.height(rr) + 1 {
                self.make(t, r, rr)
            } else {
                let t = self.rotate_left(t);
                let u = self.make(t, r, rr);
                self.rotate_right(u)
            }
        } else {
            let t = self.join_left(l, m, c);
            let u = self.make(t, r, rr);
            if self.height(t) <= self.height(rr) + 1 {
                u
            } else {
                self.rotate_right(u)
            }
        }
    }

    /// Joins `l`, the single detached node `m`, and `r`; all keys must be ordered.
    pub(crate) fn join3(&mut self, l: u32, m: u32, r: u32) -> u32 {
        self.touches += 1;
        let (hl, hr) = (self.height(l), self.height(r));
        if hl > hr + 1 {
            self.join_right(l, m, r)
        } else if hr > hl + 1 {
            self.join_left(l, m, r)
        } else {
            self.make(l, m, r)
        }
    }

    /// Splits into (keys < `key`, keys >= `key`).
    pub(crate) fn split(&mut self, t: u32, key: u64) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        self.push(t);
        let (l, r, k) = {
            let n = &self.nodes[t as usize];
            (n.left, n.right, n.key)
        };
        if k < key {
            let (a, b) = self.split(r, key);
            (self.join3(l, t, a), b)
        } else {
            let (a, b) = self.split(l, key);
            (a, self.join3(b, t, r))
        }
    }

    /// Detaches the first node: returns (rest, node).
    pub(crate) fn split_first(&mut self, t: u32) -> (u32, u32) {
        self.push(t);
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        if l == NIL {
            self.nodes[t as usize].right = NIL;
            self.update(t);
            (r, t)
        } else {
            let (rest, first) = self.split_first(l);
            (self.join3(rest, t, r), first)
        }
    }

    /// Detaches the last node: returns (rest, node).
    pub(crate) fn split_last(&mut self, t: u32) -> (u32, u32) {
        self.push(t);
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        if r == NIL {
            self.nodes[t as usize].left = NIL;
            self.update(t);
            (l, t)
        } else {
            let (rest, last) = self.split_last(r);
            (self.join3(l, t, rest), last)
        }
    }

    pub(crate) fn join2(&mut self, l: u32, r: u32) -> u32 {
        if l == NIL {
            return r;
        }
        if r == NIL {
            return l;
        }
        if self.height(l) >= self.height(r) {
            let (rest, first) = self.split_first(r);
            self.join3(l, first, rest)
        } else {
            let (rest, last) = self.split_last(l);
            self.join3(rest, last, r)
        }
    }

    pub(crate) fn first(&mut self, mut t: u32) -> Option<(u64, u64)> {
        if t == NIL {
            return None;
        }
        loop {
            self.push(t);
            let l = self.nodes[t as usize].left;
            if l == NIL {
                return Some(self.entry(t));
            }
            t = l;
        }
    }

    pub(crate) fn last(&mut self, mut t: u32) -> Option<(u64, u64)> {
        if t == NIL {
            return None;
        }
        loop {
            self.push(t);
            let r = self.nodes[t as usize].right;
            if r == NIL {
                return Some(self.entry(t));
            }
            t = r;
        }
    }

    /// Greatest entry with key < `key`.
    pub(crate) fn predecessor(&mut self, mut t: u32, key: u64) -> Option<(u64, u64)> {
        let mut best = None;
        while t != NIL {
            self.push(t);
            let n = &self.nodes[t as usize];
            if n.key < key {
                best = Some((n.key, n.val));
                t = n.right;
            } else {
                t = n.left;
            }
        }
        best
    }

    /// Rightmost entry with value >= `v`, together with the next entry in this tree.
    pub(crate) fn rightmost_at_least(
        &mut self,
        mut t: u32,
        v: u64,
    ) -> Option<(Bp, Option<Bp>)> {
        if self.max_val(t).is_none_or(|m| m < v) {
            return None;
        }
        let mut succ: Option<u32> = None;
        loop {
            self.push(t);
            let (l, r, val) = {
                let n = &self.nodes[t as usize];
                (n.left, n.right, n.val)
            };
            if self.max_val(r).is_some_and(|m| m >= v) {
                t = r;
            } else if val >= v {
                let next = if r != NIL {
                    self.first(r)
                } else {
                    succ.map(|s| self.entry(s))
                };
                return Some((self.entry(t), next));
            } else {
                succ = Some(t);
                t = l;
            }
        }
    }

    /// Builds a perfectly balanced tree from entries sorted by key.
    pub(crate) fn build(&mut self, entries: &[(u64, u64)]) -> u32 {
        if entries.is_empty() {
            return NIL;
        }
        let mid = entries.len() / 2;
        let l = self.build(&entries[..mid]);
        let r = self.build(&entries[mid + 1..]);
        let m = self.alloc(entries[mid].0, entries[mid].1);
        self.touches += 1;
        self.make(l, m, r)
    }

    pub(crate) fn collect(&mut self, t: u32, out: &mut Vec<(u64, u64)>) {
        if t == NIL {
            return;
        }
        self.push(t);
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        self.collect(l, out);
        out.push(self.entry(t));
        self.collect(r, out);
    }

    /// Splits at every key of `keys` (sorted, duplicates allowed). Piece `i + 1`
    /// holds the keys in `[keys[i], keys[i + 1])`; piece 0 the keys below `keys[0]`.
    ///
    /// Splitting at the median key first keeps the cost at O(x log(2y/x)).
    pub(crate) fn split_many(&mut self, t: u32, keys: &[u64], out: &mut Vec<u32>) {
        if keys.is_empty() {
            out.push(t);
            return;
        }
        let mid = keys.len() / 2;
        let (a, b) = self.split(t, keys[mid]);
        self.split_many(a, &keys[..mid], out);
        self.split_many(b, &keys[mid + 1..], out);
    }

    /// Joins ordered pieces back together, pairing them up like [`Arena::split_many`].
    pub(crate) fn join_many(&mut self, pieces: &[u32]) -> u32 {
        match pieces.len() {
            0 => NIL,
            1 => pieces[0],
            len => {
                let mid = len / 2;
                let l = self.join_many(&pieces[..mid]);
                let r = self.join_many(&pieces[mid..]);
                self.join2(l, r)
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn check_avl(&mut self, t: u32) -> u32 {
        if t == NIL {
            return 0;
        }
        self.push(t);
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let hl = self.check_avl(l);
        let hr = self.check_avl(r);
        assert!(hl.abs_diff(hr) <= 1, "AVL balance violated");
        assert_eq!(self.nodes[t as usize].height, 1 + hl.max(hr));
        1 + hl.max(hr)
    }
}
