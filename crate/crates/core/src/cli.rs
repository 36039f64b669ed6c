//! Command-line surface. Exit codes: 0 solved or feasible, 2 infeasible,
//! 1 on any error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{good_partition, validate_partition};
use crate::dist::DistIndex;
use crate::error::{Error, Result};
use crate::feasibility::feasibility_test;
use crate::optimizer::{optimize, DispersionAnswer};
use crate::tree::{binarize, Tree};
use crate::weighted::{
    make_set_disjointness_instance, weighted_feasibility, weighted_optimize, weighted_witness,
};
use crate::{gen, oracle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

/// Fixed CSV header for `bench`.
pub const BENCH_HEADER: &str = "mode,n,seed,value,ft_calls,touches,ms";

#[derive(Parser, Debug)]
#[command(name = "disperse", version, about = "Max-min dispersion solvers for weighted trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Largest λ admitting k nodes pairwise at distance >= λ.
    Solve {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        json: bool,
        /// Cross-check against exhaustive search (small trees only).
        #[arg(long)]
        oracle: bool,
    },
    /// Is there a set of k nodes pairwise at distance >= λ?
    Feasible {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        members: bool,
        #[arg(long)]
        json: bool,
    },
    /// Is there a set of total weight >= W pairwise at distance >= λ?
    FeasibleWeighted {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        min_weight: u64,
        #[arg(long)]
        json: bool,
    },
    /// Largest λ admitting total weight >= W.
    SolveWeighted {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        min_weight: u64,
        /// Also print a witness set (exhaustive, at most 20 nodes).
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Emit a tree file to stdout.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Fixed edge length (path, star); overrides the length range elsewhere.
        #[arg(long)]
        len: Option<u64>,
        #[arg(long, default_value_t = 0)]
        len_min: u64,
        #[arg(long, default_value_t = 10)]
        len_max: u64,
        /// Weight range `lo..hi` (random only); all weights are 1 without it.
        #[arg(long, value_parser = parse_range)]
        weights: Option<(u64, u64)>,
        /// Legs per spine node (caterpillar).
        #[arg(long, default_value_t = 2)]
        legs: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<i64>,
        #[arg(long, env = "DISPERSE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Good partition of the binarized tree.
    Partition {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        validate: bool,
    },
    /// CSV rows of counters over random trees.
    Bench {
        /// Comma-separated node counts; empty gives a header-only CSV.
        #[arg(long, value_parser = parse_sizes, default_value = "")]
        sizes: Sizes,
        /// Number of seeds per size, counted up from `--seed`.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, env = "DISPERSE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = BenchMode::Unweighted)]
        mode: BenchMode,
        /// Cardinality for unweighted rows.
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Path,
    Star,
    Caterpillar,
    Random,
    Setdisjoint,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMode {
    Unweighted,
    Weighted,
}

/// Node counts for `bench`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

fn parse_sizes(s: &str) -> std::result::Result<Sizes, String> {
    s.split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| f.parse::<usize>().map_err(|e| format!("bad size '{f}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Sizes)
}

fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got '{s}'"))?;
    let lo = a.trim().parse::<u64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<u64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Report printed by `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub command: String,
    pub lambda_star: u64,
    pub witness: Vec<usize>,
    pub ft_calls: u64,
    pub n: usize,
    pub k: usize,
    pub ms: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_agrees: Option<bool>,
}

impl SolveReport {
    pub fn answer(&self) -> DispersionAnswer {
        DispersionAnswer {
            lambda_star: self.lambda_star,
            witness: self.witness.clone(),
            ft_calls: self.ft_calls,
            n: self.n,
            elapsed_ms: self.ms,
        }
    }
}

/// Report printed by `feasible`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleReport {
    pub command: String,
    pub feasible: bool,
    pub count: usize,
    pub k: usize,
    pub lambda: u64,
    pub n: usize,
    pub visits: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub members: Option<Vec<usize>>,
}

/// Report printed by the weighted commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedReport {
    pub command: String,
    pub feasible: bool,
    pub max_weight: u64,
    pub min_weight: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_star: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<usize>>,
    pub ft_calls: u64,
    pub touches: u64,
    pub n: usize,
    pub ms: f64,
}

/// One `bench` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub mode: BenchMode,
    pub n: usize,
    pub seed: u64,
    /// `lambda_star` (unweighted) or `max_weight` at the found λ (weighted).
    pub value: u64,
    pub ft_calls: u64,
    /// Largest polyline touch count of one feasibility test; 0 in unweighted mode.
    pub touches: u64,
    pub ms: f64,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        let mode = match self.mode {
            BenchMode::Unweighted => "unweighted",
            BenchMode::Weighted => "weighted",
        };
        format!(
            "{mode},{},{},{},{},{},{:.3}",
            self.n, self.seed, self.value, self.ft_calls, self.touches, self.ms
        )
    }
}

/// Runs one row per `(size, seed)`, in parallel across rows.
///
/// Weighted rows draw weights from `1..=10` and ask for a third of the total.
pub fn bench(sizes: &[usize], seeds: &[u64], mode: BenchMode, k: usize) -> Result<Vec<BenchRow>> {
    let jobs: Vec<(usize, u64)> =
        sizes.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    jobs.par_iter()
        .map(|&(n, seed)| match mode {
            BenchMode::Unweighted => {
                let t = gen::random_tree(n, (1, 1000), None, seed)?;
                let a = optimize(&t, k.min(n))?;
                Ok(BenchRow {
                    mode,
                    n,
                    seed,
                    value: a.lambda_star,
                    ft_calls: a.ft_calls,
                    touches: 0,
                    ms: a.elapsed_ms,
                })
            }
            BenchMode::Weighted => {
                let t = gen::random_tree(n, (1, 1000), Some((1, 10)), seed)?;
                let w = (t.total_weight()? / 3).max(11);
                let a = weighted_optimize(&t, w)?;
                Ok(BenchRow {
                    mode,
                    n,
                    seed,
                    value: a.max_weight,
                    ft_calls: a.ft_calls,
                    touches: a.max_test_touches,
                    ms: a.elapsed_ms,
                })
            }
        })
        .collect()
}

fn load(path: &Path) -> Result<Tree> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Tree::parse(&text)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let s = serde_json::to_string(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{s}").map_err(io)
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Runs a parsed command, returning the exit code for non-error outcomes.
pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Solve { tree, k, json, oracle: check } => {
            let t = load(tree)?;
            let a = optimize(&t, *k)?;
            let oracle_agrees = if *check {
                let o = oracle::brute_optimize(&t, *k)?;
                Some(o.best_value == a.lambda_star)
            } else {
                None
            };
            let report = SolveReport {
                command: "solve".into(),
                lambda_star: a.lambda_star,
                witness: a.witness,
                ft_calls: a.ft_calls,
                n: a.n,
                k: *k,
                ms: a.elapsed_ms,
                oracle_agrees,
            };
            if *json {
                emit(out, &report)?;
            } else {
                writeln!(out, "lambda_star {}", report.lambda_star).map_err(io)?;
                writeln!(out, "witness {}", join_ids(&report.witness)).map_err(io)?;
                writeln!(out, "ft_calls {}", report.ft_calls).map_err(io)?;
                if let Some(ok) = oracle_agrees {
                    writeln!(out, "oracle {}", if ok { "agrees" } else { "DISAGREES" }).map_err(io)?;
                }
            }
            Ok(if oracle_agrees == Some(false) { EXIT_ERROR } else { EXIT_OK })
        }
        Command::Feasible { tree, k, lambda, members, json } => {
            let t = load(tree)?;
            if *k == 0 || *k > t.selectable_count() {
                return Err(Error::InvalidArgument(format!(
                    "k = {k} outside [1, {}]",
                    t.selectable_count()
                )));
            }
            let index = DistIndex::new(&t);
            let sol = feasibility_test(&t, &index, *lambda, *members);
            let report = FeasibleReport {
                command: "feasible".into(),
                feasible: sol.count >= *k,
                count: sol.count,
                k: *k,
                lambda: *lambda,
                n: t.len(),
                visits: sol.visits,
                members: sol.members,
            };
            if *json {
                emit(out, &report)?;
            } else {
                let verdict = if report.feasible { "feasible" } else { "infeasible" };
                writeln!(out, "{verdict} (max {} nodes at λ = {lambda})", report.count).map_err(io)?;
                if let Some(m) = &report.members {
                    writeln!(out, "members {}", join_ids(m)).map_err(io)?;
                }
            }
            Ok(if report.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::FeasibleWeighted { tree, lambda, min_weight, json } => {
            let t = load(tree)?;
            let a = weighted_feasibility(&t, *lambda, *min_weight)?;
            let report = WeightedReport {
                command: "feasible-weighted".into(),
                feasible: a.feasible,
                max_weight: a.max_weight,
                min_weight: *min_weight,
                lambda: Some(*lambda),
                lambda_star: None,
                witness: None,
                ft_calls: a.ft_calls,
                touches: a.touches,
                n: a.n,
                ms: a.elapsed_ms,
            };
            if *json {
                emit(out, &report)?;
            } else {
                let verdict = if a.feasible { "feasible" } else { "infeasible" };
                writeln!(out, "{verdict} (max weight {} at λ = {lambda})", a.max_weight).map_err(io)?;
            }
            Ok(if a.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
        }
        Command::SolveWeighted { tree, min_weight, witness, json } => {
            let t = load(tree)?;
            let a = weighted_optimize(&t, *min_weight)?;
            let lambda_star = a.lambda_star.unwrap_or(0);
            let wit = if *witness { Some(weighted_witness(&t, lambda_star)?) } else { None };
            let report = WeightedReport {
                command: "solve-weighted".into(),
                feasible: a.feasible,
                max_weight: a.max_weight,
                min_weight: *min_weight,
                lambda: None,
                lambda_star: a.lambda_star,
                witness: wit,
                ft_calls: a.ft_calls,
                touches: a.touches,
                n: a.n,
                ms: a.elapsed_ms,
            };
            if *json {
                emit(out, &report)?;
            } else {
                writeln!(out, "lambda_star {lambda_star}").map_err(io)?;
                writeln!(out, "max_weight {}", a.max_weight).map_err(io)?;
                if let Some(w) = &report.witness {
                    writeln!(out, "witness {}", join_ids(w)).map_err(io)?;
                }
                writeln!(out, "ft_calls {}", a.ft_calls).map_err(io)?;
                writeln!(out, "touches {}", a.touches).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Gen { kind, n, len, len_min, len_max, weights, legs, x, y, seed } => {
            let lens = match len {
                Some(l) => (*l, *l),
                None => (*len_min, *len_max),
            };
            if lens.0 > lens.1 {
                return Err(Error::InvalidArgument(format!("empty length range {}..{}", lens.0, lens.1)));
            }
            let t = match kind {
                GenKind::Path => gen::path(*n, len.unwrap_or(1))?,
                GenKind::Star => gen::star(n.saturating_sub(1), len.unwrap_or(1))?,
                GenKind::Caterpillar => gen::caterpillar(*n, *legs, lens, *seed)?,
                GenKind::Random => gen::random_tree(*n, lens, *weights, *seed)?,
                GenKind::Setdisjoint => {
                    let inst = make_set_disjointness_instance(x, y)?;
                    writeln!(
                        out,
                        "# set disjointness: K = {}, test at lambda {} with min weight {}",
                        inst.k, inst.lambda, inst.min_weight
                    )
                    .map_err(io)?;
                    inst.tree
                }
            };
            write!(out, "{}", t.to_text()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Partition { tree, b, validate } => {
            let t = load(tree)?;
            let bt = if t.is_binary() { t } else { binarize(&t).0 };
            let part = good_partition(&bt, *b)?;
            writeln!(out, "fragments {}", part.fragments.len()).map_err(io)?;
            let max = part.fragments.iter().map(|f| f.nodes.len()).max().unwrap_or(0);
            writeln!(out, "max_size {max}").map_err(io)?;
            if *validate {
                let r = validate_partition(&bt, &part)?;
                writeln!(
                    out,
                    "valid: {} fragments (bound {}), max size {} (bound {})",
                    r.fragments, r.count_bound, r.max_size, r.size_bound
                )
                .map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { sizes, seeds, seed, mode, k } => {
            let seed_list: Vec<u64> = (0..*seeds).map(|i| seed + i).collect();
            let rows = bench(&sizes.0, &seed_list, *mode, *k)?;
            writeln!(out, "{BENCH_HEADER}").map_err(io)?;
            for r in rows {
                writeln!(out, "{}", r.csv()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}
