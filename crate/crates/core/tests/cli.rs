use std::path::PathBuf;
use std::process::{Command, Output};

use disperse::cli::{self, SolveReport, WeightedReport, BENCH_HEADER};
use disperse::optimizer::verify_answer;
use disperse::Tree;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_disperse"));
    c.env_remove("DISPERSE_SEED");
    c
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_path3_json() {
    let p = fixture("path3.tree");
    let o = run(&["solve", "--tree", p.to_str().unwrap(), "--k", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: SolveReport = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report.lambda_star, 2);
    assert_eq!(report.n, 3);
    let tree = Tree::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert!(verify_answer(&tree, 2, &report.answer()).is_empty());
}

#[test]
fn solve_with_oracle_check() {
    let p = fixture("path3.tree");
    let o = run(&["solve", "--tree", p.to_str().unwrap(), "--k", "3", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle agrees"));
}

#[test]
fn feasible_exit_codes() {
    let p = fixture("path3.tree");
    let t = p.to_str().unwrap();
    assert_eq!(run(&["feasible", "--tree", t, "--k", "3", "--lambda", "2"]).status.code(), Some(2));
    let o = run(&["feasible", "--tree", t, "--k", "3", "--lambda", "1", "--members"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("members 0 1 2"));
}

#[test]
fn range_and_parse_errors() {
    let p = fixture("path3.tree");
    let o = run(&["solve", "--tree", p.to_str().unwrap(), "--k", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tree");
    std::fs::write(&bad, "3 0\n0 1 1\n1 two 1\n").unwrap();
    let o = run(&["solve", "--tree", bad.to_str().unwrap(), "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{o:?}");

    let o = run(&["solve", "--tree", "/nonexistent/x.tree", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["solve", "--k", "2"]).status.code(), Some(1));
}

#[test]
fn gen_path_reproduces_fixture() {
    let o = run(&["gen", "--kind", "path", "--n", "3", "--len", "1"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("path3.tree")).unwrap());
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--kind", "random", "--n", "100", "--seed", "7"]);
    let b = run(&["gen", "--kind", "random", "--n", "100", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = bin().args(["gen", "--kind", "random", "--n", "100"]).env("DISPERSE_SEED", "7").output().unwrap();
    assert_eq!(a.stdout, c.stdout);
    let d = run(&["gen", "--kind", "random", "--n", "100", "--seed", "8"]);
    assert_ne!(a.stdout, d.stdout);
    for kind in ["star", "caterpillar"] {
        let o = run(&["gen", "--kind", kind, "--n", "6", "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0));
        Tree::parse(&stdout(&o)).unwrap();
    }
}

#[test]
fn gen_setdisjoint_and_weighted_commands() {
    let o = run(&["gen", "--kind", "setdisjoint", "--x", "1,4", "--y", "4,0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("K = 11"));
    let tree = Tree::parse(&text).unwrap();
    assert_eq!(tree.len(), 6);

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("sd.tree");
    std::fs::write(&f, &text).unwrap();
    let t = f.to_str().unwrap();
    // 4 is common to both sets, so the instance is feasible.
    let o = run(&["feasible-weighted", "--tree", t, "--lambda", "22", "--min-weight", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(&["gen", "--kind", "setdisjoint", "--x", "1,3", "--y", "4,0"]);
    std::fs::write(&f, stdout(&o)).unwrap();
    let o = run(&["feasible-weighted", "--tree", t, "--lambda", "22", "--min-weight", "11"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["solve-weighted", "--tree", t, "--min-weight", "11", "--witness", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: WeightedReport = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(r.feasible && r.max_weight >= 11);
    let w: u64 = r.witness.unwrap().iter().map(|&v| tree_weight(&f, v)).sum();
    assert!(w >= 11);
}

fn tree_weight(path: &std::path::Path, v: usize) -> u64 {
    Tree::parse(&std::fs::read_to_string(path).unwrap()).unwrap().weight(v)
}

#[test]
fn partition_validates() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.tree");
    let o = run(&["gen", "--kind", "random", "--n", "2000", "--seed", "3"]);
    std::fs::write(&f, &o.stdout).unwrap();
    let o = run(&["partition", "--tree", f.to_str().unwrap(), "--b", "16", "--validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid:"));
    let o = run(&["partition", "--tree", f.to_str().unwrap(), "--b", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_rows_and_header() {
    let o = run(&["bench", "--sizes", ""]);
    assert_eq!(stdout(&o), format!("{BENCH_HEADER}\n"));

    let o = run(&["bench", "--sizes", "512,1024", "--seeds", "3"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], BENCH_HEADER);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        let n: f64 = f[1].parse().unwrap();
        let ft: f64 = f[4].parse().unwrap();
        assert!(ft <= 20.0 * n.log2(), "{l}");
    }
}

#[test]
fn in_process_run_matches_binary() {
    let p = fixture("path3.tree");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        ["disperse", "solve", "--tree", p.to_str().unwrap(), "--k", "2", "--json"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    let r: SolveReport = serde_json::from_slice(&out).unwrap();
    assert_eq!(r.witness, vec![0, 2]);
}
