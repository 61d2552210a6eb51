//! Command-line runner. Each subcommand writes its artifacts to files and a
//! one-line JSON summary to standard output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::colouring::{
    boundedness, construct_random_colouring, is_proper, read_csv_path, vizing_properize, write_csv_path,
    ConstructionParams,
};
use crate::correspondence::{check_balance_inequality, constraint_number, CorrespondenceSystem, SystemRecord};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lower::{find_clean_kst_sub, Outcome, PipelineConfig};
use crate::trees::{RootedTree, TreeRecord};
use crate::witness::{
    certify_power_free, check_pair, f2_exact, max_rooted_collection, power_pair_search, Search, WitnessRecord,
    DEFAULT_BUDGET, DEFAULT_ROOT_PAIR_LIMIT,
};

#[derive(Debug, Parser)]
#[command(name = "coloriso", version, about = "Colour-isomorphic subgraphs in edge-coloured complete graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the random polynomial colouring and write it as CSV.
    Construct(ConstructArgs),
    /// Certify properness, boundedness and rooted power freeness of a colouring.
    Verify(VerifyArgs),
    /// Constraint number of a system, or a balance inequality trial run.
    Constraint(ConstraintArgs),
    /// Search for a colour-isomorphic pair of subdivided K_{s,t}.
    Lower(LowerArgs),
    /// Exact f_2 table for small n.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Unrooted vertices of the target tree.
    #[arg(long)]
    pub a: usize,
    /// Edges of the target tree.
    #[arg(long)]
    pub b: usize,
    /// Roots of the target tree.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vertex count, at most q^b. Defaults to q^b.
    #[arg(long)]
    pub n: Option<usize>,
    /// Colouring CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Stats JSON path. Defaults to the CSV path with a `.stats.json` suffix.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub colouring: PathBuf,
    /// Rooted tree JSON. Defaults to the path with two edges rooted at its ends.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Power to certify against. Defaults to one more than the measured maximum.
    #[arg(long)]
    pub k0: Option<usize>,
    /// Node budget for the witness search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = DEFAULT_ROOT_PAIR_LIMIT)]
    pub pair_limit: u128,
    /// Certificate JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstraintArgs {
    /// System JSON.
    #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
    pub system: Option<PathBuf>,
    /// Rooted tree JSON for random trials.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Host vertices available to the sampled copies.
    #[arg(long, default_value_t = 64)]
    pub host: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LowerArgs {
    #[arg(long)]
    pub colouring: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5_000_000)]
    pub budget: u64,
    /// Vertex ordering JSON array used instead of sampled orderings.
    #[arg(long)]
    pub ordering: Option<PathBuf>,
    /// Diagnostics JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, required = true, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Pattern names such as K2, P2, C4, S3, K2,2.
    #[arg(long, required = true, value_delimiter = ';')]
    pub pattern: Vec<String>,
    /// CSV path. Defaults to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    NotFound,
    InputError,
    Inconclusive,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::NotFound => 1,
            Status::InputError => 2,
            Status::Inconclusive => 3,
        }
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s.code())
    }
}

/// Exit status for a failed run.
pub fn error_status(e: &Error) -> Status {
    match e {
        Error::BudgetExceeded { .. } => Status::Inconclusive,
        _ => Status::InputError,
    }
}

/// Runs one subcommand. The summary line is `None` when the artifact itself
/// went to standard output.
pub fn run(cli: Cli) -> Result<(Status, Option<String>)> {
    match cli.command {
        Command::Construct(a) => cmd_construct(&a).map(|s| (Status::Success, Some(summary(&s)))),
        Command::Verify(a) => {
            let cert = cmd_verify(&a)?;
            Ok((cert.status(), Some(summary(&cert))))
        }
        Command::Constraint(a) => cmd_constraint(&a).map(|(st, s)| (st, Some(s))),
        Command::Lower(a) => cmd_lower(&a).map(|(st, s)| (st, Some(s))),
        Command::Oracle(a) => {
            let rows = cmd_oracle(&a)?;
            let line = a.out.as_ref().map(|_| format!("{{\"rows\":{}}}", rows.len()));
            Ok((Status::Success, line))
        }
    }
}

fn summary<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, v)?;
    writeln!(f)?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn read_tree(path: Option<&Path>) -> Result<RootedTree> {
    match path {
        Some(p) => RootedTree::from_record(&read_json::<TreeRecord>(p)?),
        None => RootedTree::path_rooted_at_ends(2),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructStats {
    pub n: usize,
    pub q: u64,
    pub a: usize,
    pub b: usize,
    pub d: u32,
    pub seed: u64,
    pub palette_size: usize,
    #[serde(rename = "boundedness_C")]
    pub boundedness: usize,
    pub proper_after_vizing: bool,
    pub properized_palette_size: usize,
}

pub fn cmd_construct(args: &ConstructArgs) -> Result<ConstructStats> {
    let mut params = ConstructionParams::new(args.a, args.b, args.q, args.seed);
    params.tree_r = args.r;
    params.d = args.d;
    params.n = args.n;
    let rc = construct_random_colouring(&params)?;
    let p = vizing_properize(&rc.colouring);
    let stats = ConstructStats {
        n: rc.n,
        q: args.q,
        a: args.a,
        b: args.b,
        d: rc.d,
        seed: args.seed,
        palette_size: rc.colouring.palette().len(),
        boundedness: p.bound,
        proper_after_vizing: is_proper(&p.colouring),
        properized_palette_size: p.colouring.palette().len(),
    };
    write_csv_path(&rc.colouring, &args.out)?;
    let stats_path = args.stats.clone().unwrap_or_else(|| {
        let mut s = args.out.clone().into_os_string();
        s.push(".stats.json");
        PathBuf::from(s)
    });
    write_json(&stats_path, &stats)?;
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub n: usize,
    pub is_proper: bool,
    #[serde(rename = "boundedness_C")]
    pub boundedness: usize,
    pub max_rooted_collection: usize,
    pub argmax: Option<(Vec<usize>, Vec<usize>)>,
    pub k0: usize,
    /// `k0` when no pair of disjoint root tuples carries `k0` members.
    pub certified_k0: Option<usize>,
    /// `found`, `exhausted` or `budget` when a pair of `T^{k0}` copies was searched for.
    pub witness_search: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    pub witness_verified: Option<bool>,
}

impl Certificate {
    pub fn status(&self) -> Status {
        if self.certified_k0.is_some() || self.witness_verified == Some(true) {
            Status::Success
        } else if self.witness_search == Some("budget") {
            Status::Inconclusive
        } else {
            Status::NotFound
        }
    }
}

/// Measures the maximum rooted collection; when `k0` does not exceed it,
/// searches for a colour-isomorphic pair of `T^{k0}` copies and re-checks
/// any witness with the independent checker.
pub fn cmd_verify(args: &VerifyArgs) -> Result<Certificate> {
    let c = read_csv_path(&args.colouring)?;
    let t = read_tree(args.tree.as_deref())?;
    let mc = max_rooted_collection(&c, &t, usize::MAX, args.pair_limit)?;
    let k0 = args.k0.unwrap_or(mc.max + 1);
    let cert = certify_power_free(&c, &t, k0, args.pair_limit)?;
    let mut out = Certificate {
        n: c.n(),
        is_proper: is_proper(&c),
        boundedness: boundedness(&c),
        max_rooted_collection: mc.max,
        argmax: mc.argmax,
        k0,
        certified_k0: cert.holds.then_some(k0),
        witness_search: None,
        witness: None,
        witness_verified: None,
    };
    if !cert.holds {
        let search = power_pair_search(&c, &t, k0, args.budget)?;
        out.witness_search = Some(match &search {
            Search::Found(_) => "found",
            Search::Exhausted => "exhausted",
            Search::Inconclusive { .. } => "budget",
        });
        if let Search::Found(pair) = search {
            out.witness_verified = Some(check_pair(&c, &pair.pattern, &pair.map1, &pair.map2).is_ok());
            out.witness = Some(pair.to_record(&c));
        }
    }
    if let Some(path) = &args.out {
        write_json(path, &out)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub p: usize,
    pub trials: usize,
    pub violations: usize,
    /// Smallest `2k / (rho (v - 2r))` seen.
    pub tightest: (u64, u64),
    pub k_min: usize,
    pub k_max: usize,
}

pub fn cmd_constraint(args: &ConstraintArgs) -> Result<(Status, String)> {
    if let Some(path) = &args.system {
        let rec: SystemRecord = read_json(path)?;
        let sys = CorrespondenceSystem::from_record(&rec)?;
        let k = constraint_number(&sys);
        #[derive(Serialize)]
        struct Out {
            k: usize,
            union_vertices: usize,
        }
        let out = Out { k, union_vertices: sys.union_vertex_count() };
        if let Some(p) = &args.out {
            write_json(p, &out)?;
        }
        return Ok((Status::Success, summary(&out)));
    }
    let t = read_tree(args.tree.as_deref())?;
    let r = check_balance_inequality(&t, args.p, args.trials, args.host, args.seed)?;
    let report = ConstraintReport {
        p: args.p,
        trials: args.trials,
        violations: r.violations,
        tightest: r.tightest,
        k_min: r.trials.iter().map(|x| x.k).min().unwrap_or(0),
        k_max: r.trials.iter().map(|x| x.k).max().unwrap_or(0),
    };
    if let Some(p) = &args.out {
        write_json(p, &report)?;
    }
    let status = if report.violations == 0 { Status::Success } else { Status::NotFound };
    Ok((status, summary(&report)))
}

pub fn cmd_lower(args: &LowerArgs) -> Result<(Status, String)> {
    let c = read_csv_path(&args.colouring)?;
    let mut cfg = PipelineConfig::new(args.s, args.t, args.seed);
    cfg.budget = args.budget;
    if let Some(p) = &args.ordering {
        cfg.ordering = Some(read_json(p)?);
    }
    let (diag, _) = find_clean_kst_sub(&c, &cfg)?;
    if let Some(p) = &args.out {
        write_json(p, &diag)?;
    }
    let status = match diag.outcome {
        Outcome::Found => Status::Success,
        Outcome::NotFound => Status::NotFound,
        Outcome::Inconclusive => Status::Inconclusive,
    };
    Ok((status, summary(&diag)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub n: usize,
    pub pattern: String,
    pub f2: usize,
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for name in &args.pattern {
        let h = Graph::from_pattern_name(name)?;
        for &n in &args.n {
            rows.push(OracleRow { n, pattern: name.clone(), f2: f2_exact(n, &h)? });
        }
    }
    let write = |w: &mut dyn Write| -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for row in &rows {
            wtr.serialize(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
        wtr.flush()?;
        Ok(())
    };
    match &args.out {
        Some(p) => write(&mut fs::File::create(p)?)?,
        None => write(&mut std::io::stdout().lock())?,
    }
    Ok(rows)
}
