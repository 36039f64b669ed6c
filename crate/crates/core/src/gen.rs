//! Deterministic instance generators. Every generator is a pure function of its
//! parameters and seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::{NodeId, Tree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Path `0 - 1 - ... - (n-1)` with every edge of length `len`, rooted at 0.
pub fn path(n: usize, len: u64) -> Result<Tree> {
    check_n(n)?;
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v, len)).collect();
    Tree::from_edges(n, &edges, 0, None)
}

/// Star with center 0 and `leaves` leaves, all edges of length `len`.
pub fn star(leaves: usize, len: u64) -> Result<Tree> {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v, len)).collect();
    Tree::from_edges(leaves + 1, &edges, 0, None)
}

/// Spine of `spine` nodes, each with `legs` leaves. Lengths drawn from `lens`.
pub fn caterpillar(spine: usize, legs: usize, lens: (u64, u64), seed: u64) -> Result<Tree> {
    check_n(spine)?;
    check_range(lens)?;
    let mut r = rng(seed);
    let n = spine * (legs + 1);
    let mut edges = Vec::with_capacity(n - 1);
    for s in 1..spine {
        edges.push((s - 1, s, r.gen_range(lens.0..=lens.1)));
    }
    let mut next = spine;
    for s in 0..spine {
        for _ in 0..legs {
            edges.push((s, next, r.gen_range(lens.0..=lens.1)));
            next += 1;
        }
    }
    Tree::from_edges(n, &edges, 0, None)
}

/// Random recursive tree: node `v > 0` attaches to a uniform earlier node.
/// Ids are shuffled so that id order carries no structure.
pub fn random_tree(n: usize, lens: (u64, u64), weights: Option<(u64, u64)>, seed: u64) -> Result<Tree> {
    check_n(n)?;
    check_range(lens)?;
    let mut r = rng(seed);
    let mut label: Vec<NodeId> = (0..n).collect();
    label.shuffle(&mut r);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let p = r.gen_range(0..v);
        edges.push((label[p], label[v], r.gen_range(lens.0..=lens.1)));
    }
    let w = match weights {
        Some(range) => {
            check_range(range)?;
            Some((0..n).map(|_| r.gen_range(range.0..=range.1)).collect::<Vec<_>>())
        }
        None => None,
    };
    Tree::from_edges(n, &edges, label[0], w.as_deref())
}

/// Random binary tree: node `v > 0` attaches to a uniform earlier node with a free child slot.
pub fn random_binary_tree(n: usize, lens: (u64, u64), seed: u64) -> Result<Tree> {
    check_n(n)?;
    check_range(lens)?;
    let mut r = rng(seed);
    let mut open: Vec<NodeId> = vec![0, 0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let i = r.gen_range(0..open.len());
        let p = open.swap_remove(i);
        edges.push((p, v, r.gen_range(lens.0..=lens.1)));
        open.push(v);
        open.push(v);
    }
    Tree::from_edges(n, &edges, 0, None)
}

/// Complete binary tree in heap layout.
pub fn complete_binary(n: usize, len: u64) -> Result<Tree> {
    check_n(n)?;
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v, len)).collect();
    Tree::from_edges(n, &edges, 0, None)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

fn check_range((lo, hi): (u64, u64)) -> Result<()> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range {lo}..={hi}")));
    }
    Ok(())
}
