//! Acceptance suite. Runs every criterion in order, prints one line each, and
//! exits non-zero if any required criterion fails. Criterion 8 is advisory.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use disperse::decomposition::{
    good_partition, heavy_depth_bound, heavy_path_decomposition, validate_heavy_paths, validate_partition,
};
use disperse::dist::DistIndex;
use disperse::feasibility::feasibility_test;
use disperse::optimizer::{optimize, verify_answer};
use disperse::oracle::{all_pairs, brute_optimize, brute_search, brute_weighted, diameter};
use disperse::polyline::{Increase, OpenInterval, Polyline, PolylineStore};
use disperse::weighted::{make_set_disjointness_instance, max_weight, weighted_feasibility, weighted_optimize};
use disperse::{gen, Tree};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-op touch constant for criterion 6(d).
const TOUCH_C: f64 = 24.0;
/// Advisory bound on t(2n)/t(n) for criterion 8.
const SCALING_RATIO: f64 = 2.6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_tree(i: u64, max_n: usize, weights: Option<(u64, u64)>) -> Tree {
    let mut r = ChaCha8Rng::seed_from_u64(0xACCE_0000 + i);
    let n = r.gen_range(2..=max_n);
    gen::random_tree(n, (0, 8), weights, r.gen()).unwrap()
}

fn c1_unweighted_oracle() -> Outcome {
    let mut cases = 0;
    for i in 0..2000 {
        let t = corpus_tree(i, 14, None);
        for k in 2..=t.len() {
            let got = optimize(&t, k).map_err(|e| format!("tree {i} k {k}: {e}"))?;
            let want = brute_optimize(&t, k).unwrap().best_value;
            check(got.lambda_star == want, || {
                format!("tree {i} k {k}: λ* {} vs oracle {want}\n{}", got.lambda_star, t.to_text())
            })?;
            check(verify_answer(&t, k, &got).is_empty(), || format!("tree {i} k {k}: bad witness"))?;
            cases += 1;
        }
    }
    Ok(format!("2000 trees, {cases} (tree, k) cases, tolerance 0"))
}

fn c2_feasibility_oracle() -> Outcome {
    let (mut cases, mut tie) = (0, 0);
    for i in 0..2000 {
        let t = corpus_tree(i, 14, None);
        let index = DistIndex::new(&t);
        for lambda in 0..=diameter(&t) + 1 {
            let s = feasibility_test(&t, &index, lambda, false);
            let o = brute_search(&t, lambda).unwrap();
            check(s.count == o.count, || format!("tree {i} λ {lambda}: |P| {} vs {}", s.count, o.count))?;
            if t.len() <= 10 {
                check(s.nearest_dist == o.nearest_dist, || {
                    format!("tree {i} λ {lambda}: nearest {} vs {}", s.nearest_dist, o.nearest_dist)
                })?;
                tie += 1;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (tree, λ) cases, {tie} with tie-break check"))
}

fn c3_weighted_oracle() -> Outcome {
    let (mut tests, mut opts) = (0, 0);
    for i in 0..1000 {
        let mut r = ChaCha8Rng::seed_from_u64(0x3333_0000 + i);
        let n = r.gen_range(2..=12);
        let t = gen::random_tree(n, (0, 8), Some((0, 10)), r.gen()).unwrap();
        let d = all_pairs(&t);
        let mut cands: Vec<u64> = d.iter().flatten().copied().collect();
        cands.push(diameter(&t) + 1);
        cands.sort_unstable();
        cands.dedup();
        let mut best = Vec::with_capacity(cands.len());
        for &lambda in &cands {
            let got = max_weight(&t, lambda).map_err(|e| e.to_string())?.0;
            let want = brute_weighted(&t, lambda).unwrap().best_value;
            check(got == want, || format!("tree {i} λ {lambda}: {got} vs {want}\n{}", t.to_text()))?;
            best.push(want);
            tests += 1;
        }
        let total: u64 = t.weights().iter().sum();
        let single = *t.weights().iter().max().unwrap();
        for w in single + 1..=total {
            let want = cands.iter().zip(&best).filter(|&(_, &b)| b >= w).map(|(&l, _)| l).max();
            let got = weighted_optimize(&t, w).map_err(|e| format!("tree {i} W {w}: {e}"))?.lambda_star;
            check(got == want, || format!("tree {i} W {w}: λ* {got:?} vs sweep {want:?}"))?;
            opts += 1;
        }
    }
    Ok(format!("{tests} (tree, λ) tests, {opts} optimizer sweeps, tolerance 0"))
}

fn c4_reduction() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(0x4444);
    let mut hits = 0;
    for i in 0..1000 {
        let m = r.gen_range(1..=25);
        let span = r.gen_range(2 * m as i64..=m as i64 * m as i64 + 4);
        let lo = r.gen_range(-20..=20);
        let x: Vec<i64> = (0..m).map(|_| lo + r.gen_range(0..span)).collect();
        let mut y: Vec<i64> = (0..m).map(|_| lo + r.gen_range(0..span)).collect();
        if r.gen_bool(0.5) {
            // Force a shared element half the time.
            y[r.gen_range(0..m)] = x[r.gen_range(0..m)];
        }
        let xs: HashSet<i64> = x.iter().copied().collect();
        let meets = y.iter().any(|v| xs.contains(v));
        let inst = make_set_disjointness_instance(&x, &y).map_err(|e| e.to_string())?;
        let a = weighted_feasibility(&inst.tree, inst.lambda, inst.min_weight).map_err(|e| e.to_string())?;
        check(a.feasible == meets, || format!("pair {i}: feasible {} but intersect {meets}: {x:?} {y:?}", a.feasible))?;
        hits += meets as usize;
    }
    Ok(format!("1000 pairs, {hits} intersecting, exact"))
}

fn c5_polyline_fuzz() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(0x5555);
    let mut store = PolylineStore::new();
    let traces = 10_000;
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        for _ in 0..traces {
            common::run_trace(&mut r, &mut store, 12);
        }
    }));
    check(outcome.is_ok(), || "breakpoint lists diverged (see panic above)".into())?;
    Ok(format!("{traces} traces x 12 ops, breakpoint lists equal after every op"))
}

fn c6a_ft_calls() -> Outcome {
    let n = 1 << 17;
    let bound = 20.0 * (n as f64).log2();
    let mut worst = 0;
    for seed in 0..2 {
        let t = gen::random_tree(n, (1, 1000), None, seed).unwrap();
        for k in [2, 64, 4096] {
            let a = optimize(&t, k).map_err(|e| e.to_string())?;
            check(a.ft_calls as f64 <= bound, || format!("seed {seed} k {k}: {} calls > {bound}", a.ft_calls))?;
            worst = worst.max(a.ft_calls);
        }
    }
    Ok(format!("n = 2^17: max ft_calls {worst} <= 20·log2 n = {bound}"))
}

fn c6b_visits() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let n = 1000 + 500 * seed as usize;
        let t = if seed % 2 == 0 {
            gen::random_tree(n, (0, 50), None, seed).unwrap()
        } else {
            gen::caterpillar(n / 4, 3, (0, 9), seed).unwrap()
        };
        let index = DistIndex::new(&t);
        let d = diameter(&t);
        for lambda in [0, 1, d / 8, d / 2, d, d + 1] {
            let s = feasibility_test(&t, &index, lambda, false);
            let ratio = s.visits as f64 / t.len() as f64;
            check(ratio <= 3.0, || format!("seed {seed} λ {lambda}: {} visits for n {}", s.visits, t.len()))?;
            worst = worst.max(ratio);
        }
    }
    Ok(format!("max visits/n = {worst:.3} <= 3"))
}

fn c6c_weighted_touches() -> Outcome {
    let n = 1usize << 16;
    let bound = 50.0 * n as f64 * ((n + 2) as f64).log2();
    let t = gen::random_tree(n, (1, 1000), Some((1, 10)), 16).unwrap();
    let w = t.total_weight().unwrap() / 3;
    let a = weighted_optimize(&t, w).map_err(|e| e.to_string())?;
    check(a.max_test_touches as f64 <= bound, || format!("{} touches > {bound}", a.max_test_touches))?;
    let per = a.max_test_touches as f64 / (n as f64 * ((n + 2) as f64).log2());
    Ok(format!(
        "n = 2^16: max touches per test {} = {per:.2}·n·log2(n+2) <= 50·n·log2(n+2) over {} tests",
        a.max_test_touches, a.ft_calls
    ))
}

/// Polyline with `y` breakpoints at even keys and values falling by 2, so
/// every gap admits an insert.
fn staircase(store: &mut PolylineStore, y: usize) -> Polyline {
    let bps: Vec<(u64, u64)> = (0..y).map(|i| (2 * i as u64, 2 * (y - i) as u64 + 2)).collect();
    store.from_breakpoints(2 * y as u64 + 4, &bps).unwrap()
}

fn c6d_op_touches() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(0x6666);
    let mut store = PolylineStore::new();
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for y in [1usize << 10, 1 << 14, 1 << 17] {
        for x in [1usize, 4, 32, 256, 2048, y / 4].into_iter().filter(|&x| x <= y / 4) {
            let bound_unit = x as f64 * ((2.0 * y as f64 / x as f64).log2() + 1.0);
            // Sorted distinct breakpoint indices, at least two apart.
            let mut pos: Vec<usize> = sample(&mut r, y / 2 - 1, x).into_iter().map(|i| 2 * i).collect();
            pos.sort_unstable();
            let key = |i: usize| 2 * i as u64;
            for op in 0..5 {
                let mut p = staircase(&mut store, y);
                store.reset_touches();
                match op {
                    0 => {
                        let b: Vec<Increase> =
                            pos.iter().map(|&i| Increase { lo: key(i), hi: Some(key(i) + 1), delta: 1 }).collect();
                        store.batched_interval_increase(&mut p, &b).map_err(|e| e.to_string())?;
                    }
                    1 => {
                        let b: Vec<(u64, u64)> = pos.iter().map(|&i| (key(i) + 1, (y - i) as u64)).collect();
                        store.batched_value_predecessor(&mut p, &b).map_err(|e| e.to_string())?;
                    }
                    2 => {
                        let ts: Vec<u64> = pos.iter().map(|&i| key(i) + 1).collect();
                        store.batched_query(&mut p, &ts).map_err(|e| e.to_string())?;
                    }
                    3 => {
                        let b: Vec<OpenInterval> =
                            pos.iter().map(|&i| OpenInterval { lo: Some(key(i)), hi: Some(key(i) + 3) }).collect();
                        store.batched_interval_delete(&mut p, &b).map_err(|e| e.to_string())?;
                    }
                    _ => {
                        let lists: Vec<Vec<(u64, u64)>> =
                            pos.iter().map(|&i| vec![(key(i) + 1, 2 * (y - i) as u64 + 1)]).collect();
                        store.batched_interval_insert(&mut p, lists).map_err(|e| e.to_string())?;
                    }
                }
                let ratio = store.touches() as f64 / bound_unit;
                if ratio > worst {
                    worst = ratio;
                    worst_at = format!("op {op} x {x} y {y}");
                }
                store.free(p);
            }
        }
    }
    check(worst <= TOUCH_C, || format!("ratio {worst:.2} > c = {TOUCH_C} at {worst_at}"))?;
    Ok(format!("max touches / (x·(log2(2y/x)+1)) = {worst:.2} <= c = {TOUCH_C} ({worst_at})"))
}

fn c7_structure() -> Outcome {
    let n = 100_000;
    let mut parts = Vec::new();
    for (seed, b) in [(71u64, 16usize), (72, 256)] {
        let t = gen::random_binary_tree(n, (1, 9), seed).unwrap();
        let p = good_partition(&t, b).map_err(|e| e.to_string())?;
        let rep = validate_partition(&t, &p).map_err(|e| format!("b {b}: {e}"))?;
        parts.push(format!("b={b}: {} fragments (<= {}), max {} (<= {})", rep.fragments, rep.count_bound, rep.max_size, rep.size_bound));
    }
    let mut r = ChaCha8Rng::seed_from_u64(0x7777);
    let mut tightest = 0;
    for i in 0..100 {
        let n = r.gen_range(2..=10_000);
        let t = if i % 3 == 0 {
            gen::random_binary_tree(n, (1, 9), r.gen()).unwrap()
        } else {
            gen::random_tree(n, (1, 9), None, r.gen()).unwrap()
        };
        let h = heavy_path_decomposition(&t);
        validate_heavy_paths(&t, &h).map_err(|e| format!("tree {i}: {e}"))?;
        let bound = heavy_depth_bound(n);
        check(h.max_depth() <= bound, || format!("tree {i}: depth {} > {bound}", h.max_depth()))?;
        tightest = tightest.max(h.max_depth());
    }
    Ok(format!("{}; heavy paths on 100 trees, max depth {tightest}", parts.join("; ")))
}

fn c8_scaling() -> Outcome {
    let sizes: Vec<usize> = (15..=19).map(|e| 1 << e).collect();
    let mut means = Vec::new();
    for &n in &sizes {
        let mut total = 0.0;
        for seed in 0..3 {
            let t = gen::random_tree(n, (1, 1000), None, 800 + seed).unwrap();
            let start = Instant::now();
            optimize(&t, 16).map_err(|e| e.to_string())?;
            total += start.elapsed().as_secs_f64();
        }
        means.push(total / 3.0);
    }
    let ratios: Vec<f64> = means.windows(2).map(|w| w[1] / w[0]).collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    let msg = format!("t(2n)/t(n) = [{}], max {worst:.2} (advisory bound {SCALING_RATIO})", shown.join(", "));
    if worst <= SCALING_RATIO {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let required: [Criterion; 9] = [
        ("1 unweighted optimizer = oracle", c1_unweighted_oracle),
        ("2 feasibility test = oracle (with tie-break)", c2_feasibility_oracle),
        ("3 weighted test and optimizer = oracle", c3_weighted_oracle),
        ("4 set-disjointness reduction", c4_reduction),
        ("5 polyline differential fuzz", c5_polyline_fuzz),
        ("6a optimizer feasibility-test calls", c6a_ft_calls),
        ("6b linear test node visits", c6b_visits),
        ("6c weighted test polyline touches", c6c_weighted_touches),
        ("6d batched polyline op touches", c6d_op_touches),
    ];
    let mut failed = 0;
    for (name, f) in required {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    let start = Instant::now();
    match c7_structure() {
        Ok(msg) => println!("PASS criterion 7 structural validators: {msg} [{:.1}s]", start.elapsed().as_secs_f64()),
        Err(msg) => {
            failed += 1;
            println!("FAIL criterion 7 structural validators: {msg}");
        }
    }
    let start = Instant::now();
    let secs = || start.elapsed().as_secs_f64();
    match c8_scaling() {
        Ok(msg) => println!("PASS criterion 8 scaling (advisory): {msg} [{:.1}s]", secs()),
        Err(msg) => println!("WARN criterion 8 scaling (advisory, not failing): {msg} [{:.1}s]", secs()),
    }
    if failed > 0 {
        println!("{failed} required criteria failed");
        std::process::exit(1);
    }
    println!("all required criteria passed");
}
