//! C ABI over `disperse`.
//!
//! Every entry point returns a [`DisperseStatus`]; results go through out
//! pointers. Trees and answers are opaque handles owned by the caller and
//! released with the matching `*_free`. The message for the last failure on
//! the calling thread is available from [`disperse_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use disperse::optimizer::{optimize, DispersionAnswer};
use disperse::weighted::{max_weight, weighted_optimize};
use disperse::{dist::DistIndex, feasibility::is_feasible, Error, Tree};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisperseStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    NotATree = 3,
    InvalidArgument = 4,
    Overflow = 5,
    Utf8 = 6,
    Internal = 7,
    Panic = 8,
}

/// Opaque tree handle.
pub struct DisperseTree(Tree);

/// Opaque unweighted answer handle.
pub struct DisperseAnswer(DispersionAnswer);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DisperseStatus {
    match err {
        Error::Parse { .. } => DisperseStatus::Parse,
        Error::NotATree(_) | Error::NodeOutOfRange { .. } | Error::NotBinary(_) => DisperseStatus::NotATree,
        Error::LengthOverflow | Error::WeightOverflow => DisperseStatus::Overflow,
        Error::InvalidArgument(_) | Error::TooLarge { .. } => DisperseStatus::InvalidArgument,
        _ => DisperseStatus::Internal,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F>(f: F) -> DisperseStatus
where
    F: FnOnce() -> Result<(), (DisperseStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DisperseStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside disperse".into());
            DisperseStatus::Panic
        }
    }
}

fn lift<T>(r: disperse::Result<T>) -> Result<T, (DisperseStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (DisperseStatus, String) {
    (DisperseStatus::NullPointer, format!("{what} is null"))
}

unsafe fn tree_ref<'a>(t: *const DisperseTree) -> Result<&'a Tree, (DisperseStatus, String)> {
    t.as_ref().map(|t| &t.0).ok_or_else(|| null("tree"))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn disperse_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn disperse_status_str(status: DisperseStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DisperseStatus::Ok => c"ok",
        DisperseStatus::NullPointer => c"null pointer",
        DisperseStatus::Parse => c"parse error",
        DisperseStatus::NotATree => c"not a tree",
        DisperseStatus::InvalidArgument => c"invalid argument",
        DisperseStatus::Overflow => c"overflow",
        DisperseStatus::Utf8 => c"invalid utf-8",
        DisperseStatus::Internal => c"internal error",
        DisperseStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Parses a tree from the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disperse_tree_parse(text: *const c_char, out: *mut *mut DisperseTree) -> DisperseStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (DisperseStatus::Utf8, e.to_string()))?;
        let tree = lift(Tree::parse(s))?;
        *out = Box::into_raw(Box::new(DisperseTree(tree)));
        Ok(())
    })
}

/// Builds a tree from `n - 1` edges `(us[i], vs[i], lens[i])`. `weights` may
/// be null (all ones) or point to `n` values.
///
/// # Safety
/// The edge arrays must hold `n - 1` elements (none if `n <= 1`), `weights`
/// must be null or hold `n`, and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_tree_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    lens: *const u64,
    root: usize,
    weights: *const u64,
    out: *mut *mut DisperseTree,
) -> DisperseStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = n.saturating_sub(1);
        let slice = |p: *const usize, what: &str| -> Result<&[usize], (DisperseStatus, String)> {
            if m == 0 {
                Ok(&[])
            } else if p.is_null() {
                Err(null(what))
            } else {
                Ok(std::slice::from_raw_parts(p, m))
            }
        };
        let us = slice(us, "us")?;
        let vs = slice(vs, "vs")?;
        let lens: &[u64] = if m == 0 {
            &[]
        } else if lens.is_null() {
            return Err(null("lens"));
        } else {
            std::slice::from_raw_parts(lens, m)
        };
        let edges: Vec<_> = (0..m).map(|i| (us[i], vs[i], lens[i])).collect();
        let w = (!weights.is_null()).then(|| std::slice::from_raw_parts(weights, n));
        let tree = lift(Tree::from_edges(n, &edges, root, w))?;
        *out = Box::into_raw(Box::new(DisperseTree(tree)));
        Ok(())
    })
}

/// Releases a tree. Null is ignored.
///
/// # Safety
/// `tree` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn disperse_tree_free(tree: *mut DisperseTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Node count, or 0 for null.
///
/// # Safety
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_tree_len(tree: *const DisperseTree) -> usize {
    tree.as_ref().map_or(0, |t| t.0.len())
}

/// Largest λ such that `k` nodes are pairwise at distance `>= λ`.
///
/// # Safety
/// `tree` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_optimize(
    tree: *const DisperseTree,
    k: usize,
    out: *mut *mut DisperseAnswer,
) -> DisperseStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let a = lift(optimize(t, k))?;
        *out = Box::into_raw(Box::new(DisperseAnswer(a)));
        Ok(())
    })
}

/// # Safety
/// `answer` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_answer_lambda(answer: *const DisperseAnswer) -> u64 {
    answer.as_ref().map_or(0, |a| a.0.lambda_star)
}

/// # Safety
/// `answer` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_answer_ft_calls(answer: *const DisperseAnswer) -> u64 {
    answer.as_ref().map_or(0, |a| a.0.ft_calls)
}

/// Witness size.
///
/// # Safety
/// `answer` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_answer_witness_len(answer: *const DisperseAnswer) -> usize {
    answer.as_ref().map_or(0, |a| a.0.witness.len())
}

/// Copies up to `cap` witness ids (ascending) into `buf`; returns the number
/// copied.
///
/// # Safety
/// `answer` must be a live handle and `buf` hold `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn disperse_answer_witness(answer: *const DisperseAnswer, buf: *mut usize, cap: usize) -> usize {
    let Some(a) = answer.as_ref() else { return 0 };
    if buf.is_null() {
        return 0;
    }
    let m = cap.min(a.0.witness.len());
    ptr::copy_nonoverlapping(a.0.witness.as_ptr(), buf, m);
    m
}

/// Releases an answer. Null is ignored.
///
/// # Safety
/// `answer` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn disperse_answer_free(answer: *mut DisperseAnswer) {
    if !answer.is_null() {
        drop(Box::from_raw(answer));
    }
}

/// Sets `*out` to whether `k` nodes fit pairwise at distance `>= lambda`.
///
/// # Safety
/// `tree` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_feasible(
    tree: *const DisperseTree,
    k: usize,
    lambda: u64,
    out: *mut bool,
) -> DisperseStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let index = DistIndex::new(t);
        *out = is_feasible(t, &index, k, lambda);
        Ok(())
    })
}

/// Largest total weight of a set pairwise at distance `>= lambda`.
///
/// # Safety
/// `tree` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_max_weight(tree: *const DisperseTree, lambda: u64, out: *mut u64) -> DisperseStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lift(max_weight(t, lambda))?.0;
        Ok(())
    })
}

/// Largest λ admitting total weight `>= min_weight`. `max_weight_out` may be
/// null; otherwise it receives the best weight at that λ.
///
/// # Safety
/// `tree` must be a live handle, `lambda_out` valid, `max_weight_out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_weighted_optimize(
    tree: *const DisperseTree,
    min_weight: u64,
    lambda_out: *mut u64,
    max_weight_out: *mut u64,
) -> DisperseStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        let lo = lambda_out.as_mut().ok_or_else(|| null("lambda_out"))?;
        let a = lift(weighted_optimize(t, min_weight))?;
        *lo = a.lambda_star.unwrap_or(0);
        if let Some(w) = max_weight_out.as_mut() {
            *w = a.max_weight;
        }
        Ok(())
    })
}
