//! Helpers shared by the integration tests: random polylines and batches.
#![allow(dead_code)]

use disperse::oracle::NaivePolyline;
use disperse::polyline::{Increase, OpenInterval, Polyline, PolylineStore};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_normalized(r: &mut ChaCha8Rng, max_len: usize) -> NaivePolyline {
    let len = r.gen_range(1..=max_len);
    let mut key = 0;
    let mut val = r.gen_range(len as u64..=3 * len as u64 + 5);
    let vz = val + r.gen_range(0..3);
    let mut bps = Vec::with_capacity(len);
    for i in 0..len {
        if i > 0 {
            key += r.gen_range(1..4);
            val -= r.gen_range(1..=2).min(val);
        }
        if bps.last().is_some_and(|&(_, v)| v == val) {
            break;
        }
        bps.push((key, val));
    }
    NaivePolyline::new(vz, bps).unwrap()
}

pub fn load(store: &mut PolylineStore, n: &NaivePolyline) -> Polyline {
    store.from_breakpoints(n.value_at_zero, &n.bps).unwrap()
}

pub fn same(store: &mut PolylineStore, p: &Polyline, n: &NaivePolyline) {
    assert_eq!(store.to_sorted_list(p), n.bps);
    assert_eq!(p.value_at_zero(), n.value_at_zero);
    assert_eq!(store.len(p), n.bps.len());
}

pub fn max_key(n: &NaivePolyline) -> u64 {
    n.bps.last().map_or(0, |e| e.0) + 4
}

pub fn random_increases(r: &mut ChaCha8Rng, top: u64) -> Vec<Increase> {
    let mut out = Vec::new();
    let mut lo = r.gen_range(0..3);
    while lo < top && out.len() < 6 {
        let width = r.gen_range(1..5);
        let hi = if r.gen_bool(0.15) { None } else { Some(lo + width) };
        out.push(Increase { lo, hi, delta: r.gen_range(0..6) });
        match hi {
            None => break,
            Some(hi) => lo = hi + r.gen_range(0..4),
        }
    }
    out
}

pub fn random_deletes(r: &mut ChaCha8Rng, top: u64) -> Vec<OpenInterval> {
    let mut out = Vec::new();
    let mut at = 0;
    if r.gen_bool(0.2) {
        let hi = r.gen_range(0..top);
        out.push(OpenInterval { lo: None, hi: Some(hi) });
        at = hi;
    }
    while at < top && out.len() < 5 {
        let lo = at + r.gen_range(0..3);
        let hi = if r.gen_bool(0.1) { None } else { Some(lo + r.gen_range(1..6)) };
        out.push(OpenInterval { lo: Some(lo), hi });
        match hi {
            None => break,
            Some(hi) => at = hi.saturating_sub(1) + r.gen_range(0..3),
        }
    }
    out
}

pub fn random_inserts(r: &mut ChaCha8Rng, n: &NaivePolyline) -> Vec<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for w in n.bps.windows(2) {
        let ((k0, v0), (k1, v1)) = (w[0], w[1]);
        if k1 - k0 >= 2 && r.gen_bool(0.4) {
            // Occasionally invalid values, to exercise rejection.
            let v = if r.gen_bool(0.9) && v0 > v1 + 1 { r.gen_range(v1 + 1..v0) } else { v0 };
            out.push(vec![(r.gen_range(k0 + 1..k1), v)]);
        }
    }
    if let Some(&(k, v)) = n.bps.last() {
        if v >= 2 && r.gen_bool(0.3) {
            out.push(vec![(k + 1, v - 1), (k + 3, r.gen_range(0..v - 1))]);
        }
    }
    out
}

/// One random trace: a fresh polyline driven through `steps` operations, with
/// both representations compared after each. Panics on the first mismatch.
pub fn run_trace(r: &mut ChaCha8Rng, store: &mut PolylineStore, steps: usize) {
    let mut naive = random_normalized(r, 30);
    let mut tree = load(store, &naive);
    for _step in 0..steps {
        let top = max_key(&naive);
        match r.gen_range(0..7) {
            0 => {
                let batch = random_increases(r, top);
                let a = naive.batched_interval_increase(&batch);
                let b = store.batched_interval_increase(&mut tree, &batch);
                assert_eq!(a, b, "increase {batch:?}");
            }
            1 => {
                let batch = random_deletes(r, top);
                let a = naive.batched_interval_delete(&batch);
                let b = store.batched_interval_delete(&mut tree, &batch);
                assert_eq!(a.is_ok(), b.is_ok(), "delete {batch:?}");
            }
            2 => {
                let lists = random_inserts(r, &naive);
                let a = naive.batched_interval_insert(lists.clone());
                let b = store.batched_interval_insert(&mut tree, lists.clone());
                assert_eq!(a.is_ok(), b.is_ok(), "insert {lists:?}");
            }
            3 => {
                let mut batch: Vec<(u64, u64)> = (0..r.gen_range(0..8))
                    .map(|_| (r.gen_range(0..=top), r.gen_range(0..=naive.value_at_zero + 2)))
                    .collect();
                batch.sort_unstable_by_key(|e| e.0);
                assert_eq!(
                    naive.batched_value_predecessor(&batch).unwrap(),
                    store.batched_value_predecessor(&mut tree, &batch).unwrap()
                );
            }
            4 => {
                for t in 0..=top {
                    assert_eq!(naive.query(t), store.query(&tree, t));
                }
                let ts: Vec<u64> = (0..=top).collect();
                let want: Vec<u64> = ts.iter().map(|&t| naive.query(t)).collect();
                assert_eq!(store.batched_query(&mut tree, &ts).unwrap(), want);
            }
            5 => {
                let e = r.gen_range(0..4);
                naive.shift(e);
                store.shift(&mut tree, e);
            }
            _ => {
                let key = r.gen_range(0..=top);
                let (nl, nr) = naive.split(key);
                let mut right = store.split_off(&mut tree, key);
                same(store, &tree, &nl);
                same(store, &right, &nr);
                let joined = nl.join(&nr);
                let res = store.append(&mut tree, &mut right);
                assert_eq!(joined.is_ok(), res.is_ok());
                match joined {
                    Ok(j) => naive = j,
                    Err(_) => {
                        // Rejected joins leave both halves alone; drop the right one.
                        naive = nl;
                        store.free(right);
                    }
                }
            }
        }
        same(store, &tree, &naive);
    }
    store.free(tree);
}
