use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use disperse_ffi::*;

fn parse(text: &str) -> *mut DisperseTree {
    let c = CString::new(text).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { disperse_tree_parse(c.as_ptr(), &mut t) }, DisperseStatus::Ok);
    t
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(disperse_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn optimize_path3() {
    let t = parse("3 0\n0 1 1\n1 2 1\n");
    assert_eq!(unsafe { disperse_tree_len(t) }, 3);
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { disperse_optimize(t, 2, &mut a) }, DisperseStatus::Ok);
    assert_eq!(unsafe { disperse_answer_lambda(a) }, 2);
    assert!(unsafe { disperse_answer_ft_calls(a) } >= 1);
    let len = unsafe { disperse_answer_witness_len(a) };
    let mut buf = vec![0usize; len];
    assert_eq!(unsafe { disperse_answer_witness(a, buf.as_mut_ptr(), len) }, len);
    assert_eq!(buf, vec![0, 2]);
    let mut ok = true;
    assert_eq!(unsafe { disperse_feasible(t, 3, 2, &mut ok) }, DisperseStatus::Ok);
    assert!(!ok);
    unsafe {
        disperse_answer_free(a);
        disperse_tree_free(t);
    }
}

#[test]
fn weighted_entry_points() {
    let us = [0usize, 0];
    let vs = [1usize, 2];
    let lens = [3u64, 4];
    let w = [1u64, 5, 6];
    let mut t = ptr::null_mut();
    let s = unsafe { disperse_tree_from_edges(3, us.as_ptr(), vs.as_ptr(), lens.as_ptr(), 0, w.as_ptr(), &mut t) };
    assert_eq!(s, DisperseStatus::Ok);
    let mut mw = 0;
    assert_eq!(unsafe { disperse_max_weight(t, 7, &mut mw) }, DisperseStatus::Ok);
    assert_eq!(mw, 11);
    let (mut lam, mut best) = (0, 0);
    assert_eq!(unsafe { disperse_weighted_optimize(t, 11, &mut lam, &mut best) }, DisperseStatus::Ok);
    assert_eq!((lam, best), (7, 11));
    unsafe { disperse_tree_free(t) };
}

#[test]
fn error_codes() {
    let bad = CString::new("3 0\n0 1 1\n").unwrap();
    let mut t = ptr::null_mut();
    let s = unsafe { disperse_tree_parse(bad.as_ptr(), &mut t) };
    assert_ne!(s, DisperseStatus::Ok);
    assert!(t.is_null());
    assert!(!last_error().is_empty());

    let s = unsafe { disperse_tree_parse(ptr::null(), &mut t) };
    assert_eq!(s, DisperseStatus::NullPointer);
    assert!(last_error().contains("null"));

    let t = parse("3 0\n0 1 1\n1 2 1\n");
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { disperse_optimize(t, 0, &mut a) }, DisperseStatus::InvalidArgument);
    assert!(a.is_null());
    assert_eq!(unsafe { disperse_optimize(ptr::null(), 2, &mut a) }, DisperseStatus::NullPointer);

    let us = [0usize, 1];
    let vs = [1usize, 0];
    let lens = [1u64, 1];
    let mut d = ptr::null_mut();
    let s = unsafe { disperse_tree_from_edges(3, us.as_ptr(), vs.as_ptr(), lens.as_ptr(), 0, ptr::null(), &mut d) };
    assert_eq!(s, DisperseStatus::NotATree);

    let msg = unsafe { CStr::from_ptr(disperse_status_str(DisperseStatus::Overflow)) };
    assert_eq!(msg.to_str().unwrap(), "overflow");
    unsafe {
        disperse_tree_free(t);
        disperse_tree_free(ptr::null_mut());
        disperse_answer_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

/// Compiles a C program against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libdisperse_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{run:?}");
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "lambda 2 witness 0 2");
}
