//! Exact solver for the unweighted dispersion problem: the largest `λ` such
//! that `k` selectable nodes can be pairwise at distance `>= λ`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dist::DistIndex;
use crate::error::{Error, Result};
use crate::feasibility::{feasibility_test, is_feasible};
use crate::matrix::{centroid_matrices, parametric_search, SearchOptions};
use crate::tree::{NodeId, Tree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionAnswer {
    pub lambda_star: u64,
    pub witness: Vec<NodeId>,
    /// Feasibility tests run by the search, plus one for the witness.
    pub ft_calls: u64,
    pub n: usize,
    pub elapsed_ms: f64,
}

pub(crate) fn check_k(tree: &Tree, k: usize) -> Result<()> {
    let sel = tree.selectable_count();
    if k == 1 {
        return Err(Error::InvalidArgument(
            "k = 1 has no pairs, so every λ is feasible; pick any single node".into(),
        ));
    }
    if k < 2 || k > sel {
        return Err(Error::InvalidArgument(format!("k = {k} outside [2, {sel}]")));
    }
    Ok(())
}

pub fn optimize(tree: &Tree, k: usize) -> Result<DispersionAnswer> {
    check_k(tree, k)?;
    let start = Instant::now();
    let (tree, original) = tree.relabel_bfs();
    let tree = &tree;
    let index = DistIndex::new(tree);
    let matrices = centroid_matrices(tree);
    let state = parametric_search(
        &matrices,
        |lambda| Ok(is_feasible(tree, &index, k, lambda)),
        SearchOptions::default(),
    )?;
    let lambda_star = state.lambda1;
    let sol = feasibility_test(tree, &index, lambda_star, true);
    debug_assert!(sol.count >= k);
    Ok(DispersionAnswer {
        lambda_star,
        witness: {
            let mut w: Vec<NodeId> = sol.members.unwrap_or_default().into_iter().map(|v| original[v]).collect();
            w.sort_unstable();
            w
        },
        ft_calls: state.ft_calls + 1,
        n: tree.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Why an answer fails verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WitnessTooSmall { size: usize, k: usize },
    BadNode(NodeId),
    PairTooClose { u: NodeId, v: NodeId, dist: u64 },
    NotMaximal { lambda: u64 },
}

/// Re-checks an answer: witness size, witness distances, and infeasibility
/// one above `lambda_star`. Returns the violations found (empty when valid).
pub fn verify_answer(tree: &Tree, k: usize, answer: &DispersionAnswer) -> Vec<Violation> {
    let mut out = Vec::new();
    let index = DistIndex::new(tree);
    let w = &answer.witness;
    if w.len() < k {
        out.push(Violation::WitnessTooSmall { size: w.len(), k });
    }
    let mut seen = vec![false; tree.len()];
    for &u in w {
        if u >= tree.len() || !tree.is_selectable(u) || std::mem::replace(&mut seen[u], true) {
            out.push(Violation::BadNode(u));
        }
    }
    if out.iter().all(|v| !matches!(v, Violation::BadNode(_))) {
        'pairs: for (a, &u) in w.iter().enumerate() {
            for &v in &w[a + 1..] {
                let dist = index.dist(u, v);
                if dist < answer.lambda_star {
                    out.push(Violation::PairTooClose { u, v, dist });
                    break 'pairs;
                }
            }
        }
    }
    let next = answer.lambda_star.saturating_add(1);
    if is_feasible(tree, &index, k, next) {
        out.push(Violation::NotMaximal { lambda: next });
    }
    out
}
