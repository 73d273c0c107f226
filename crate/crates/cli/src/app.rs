//! Command-line driver. Exit codes: 0 success, 1 invalid input, 2 usage
//! error, 3 non-termination or budget diagnostics.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use wrsm::automaton::{configurations_automaton, dot_export, ConfigAutomaton};
use wrsm::concurrent::{enumerate_reachable, is_global_config_reachable, k_bounded_reach, Crsm};
use wrsm::confdist::post_star;
use wrsm::extraction::{
    config_distance, node_distances, same_context_distances, superconfig_automaton, superconfig_distance,
};
use wrsm::oracle::{stabilized_distances, OracleOptions};
use wrsm::rsm::{validate, Configuration, Rsm};
use wrsm::semiring::{show, Semiring, SemiringSpec, Value};

use crate::bench::{dense_row, to_csv};
use crate::doc::{parse_queries, AutomatonDocument, CrsmDocument, DocError, Query, RsmDocument};

#[derive(Debug, Parser)]
#[command(name = "wrsm", version, about = "Distance queries on weighted recursive state machines")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check an RSM document for well-formedness.
    Validate { rsm: PathBuf },
    /// Saturate an initial configuration set and write the automaton.
    PostStar {
        rsm: PathBuf,
        /// `node [b1,b2]` or `entries:MODULE`; repeatable.
        #[arg(long, required = true)]
        init: Vec<String>,
        /// Automaton document to write; printed to stdout when neither
        /// output is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Answer distance queries from the saturated automaton.
    Query {
        rsm: PathBuf,
        #[arg(long, required = true)]
        init: Vec<String>,
        #[arg(long)]
        queries: PathBuf,
    },
    /// Context-bounded reachability of a concurrent RSM.
    Concurrent {
        crsm: PathBuf,
        #[arg(short = 'k', long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Global configuration `c1 | c2 | ...`; repeatable. Without it every
        /// reachable global configuration up to `--max-height` is listed.
        #[arg(long)]
        check: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_height: usize,
    },
    /// Answer configuration queries by explicit exploration.
    Oracle {
        rsm: PathBuf,
        #[arg(long, required = true)]
        init: Vec<String>,
        #[arg(long)]
        queries: PathBuf,
        /// Largest stack bound tried before giving up.
        #[arg(long, default_value_t = 40)]
        ceiling: usize,
    },
    /// Compare the saturation engines on a synthetic family.
    Bench {
        #[command(subcommand)]
        family: BenchFamily,
    },
}

#[derive(Debug, Subcommand)]
enum BenchFamily {
    /// One module with n entries, n exits and one recursive box.
    Dense {
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
        sizes: Vec<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
    Diverged(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Diverged(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::Diverged(m) => m,
        }
    }
}

impl From<wrsm::Error> for Failure {
    fn from(e: wrsm::Error) -> Self {
        match e {
            wrsm::Error::NonTermination { .. }
            | wrsm::Error::BudgetExceeded { .. }
            | wrsm::Error::Inconclusive { .. } => Failure::Diverged(e.to_string()),
            wrsm::Error::ZeroContextBound => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Model(m) => m.into(),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn with_context(path: &Path) -> impl Fn(Failure) -> Failure + '_ {
    move |f| match f {
        Failure::Invalid(m) => Failure::Invalid(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// Loads an RSM, normalizing exit weights when needed.
fn load_rsm(path: &Path, err: &mut dyn Write) -> Result<Rsm<SemiringSpec>, Failure> {
    let doc = RsmDocument::parse(&read(path)?).map_err(Failure::from).map_err(with_context(path))?;
    let rsm = doc.to_rsm().map_err(Failure::from).map_err(with_context(path))?;
    if rsm.is_normalized() {
        return Ok(rsm);
    }
    let _ = writeln!(err, "note: transitions into exits with non-one weights were split");
    Ok(rsm.normalize_exit_weights())
}

fn initial_configs(rsm: &Rsm<SemiringSpec>, specs: &[String]) -> Result<Vec<Configuration>, Failure> {
    let mut out = Vec::new();
    for spec in specs {
        match spec.strip_prefix("entries:") {
            Some(m) => {
                let m = rsm.module_id(m.trim())?;
                out.extend(rsm.module(m).entries.iter().map(|&e| Configuration::new(e, vec![])));
            }
            None => out.push(rsm.parse_config(spec)?),
        }
    }
    Ok(out)
}

fn saturate(rsm: &Rsm<SemiringSpec>, init: &[String]) -> Result<wrsm::confdist::PostStar<Value>, Failure> {
    let configs = initial_configs(rsm, init)?;
    let a = configurations_automaton(rsm, &configs)?;
    Ok(post_star(rsm, &a)?)
}

fn node_of_kind(rsm: &Rsm<SemiringSpec>, name: &str) -> Result<wrsm::NodeId, Failure> {
    let u = rsm.node_id(name)?;
    if !rsm.kind(u).is_configuration_node() {
        return Err(Failure::Invalid(format!("`{name}` is not an internal, entry or return node")));
    }
    Ok(u)
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let doc = RsmDocument::parse(&read(path)?).map_err(Failure::from).map_err(with_context(path))?;
    let (spec, def) = doc.to_def().map_err(Failure::from).map_err(with_context(path))?;
    let report = validate(&spec, &def);
    if !report.is_empty() {
        return Err(Failure::Invalid(format!("{}:\n{report}", path.display())));
    }
    let rsm = Rsm::new(spec, &def)?;
    let m = rsm.metrics();
    let _ = writeln!(
        out,
        "ok: {} modules, {} nodes, {} transitions, max entries {}, max exits {}",
        m.modules, m.nodes, m.transitions, m.theta_e, m.theta_x
    );
    Ok(())
}

fn cmd_post_star(
    path: &Path,
    init: &[String],
    out_path: Option<&Path>,
    dot: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let rsm = load_rsm(path, err)?;
    let post = saturate(&rsm, init)?;
    let doc = AutomatonDocument::from_automaton(&rsm, &post.automaton);
    if let Some(p) = out_path {
        write(p, &doc.to_json())?;
    }
    if let Some(p) = dot {
        write(p, &dot_export(&rsm, &post.automaton))?;
    }
    if out_path.is_none() && dot.is_none() {
        let _ = writeln!(out, "{}", doc.to_json());
    } else {
        let _ = writeln!(
            out,
            "states {} transitions {} summaries {} relaxations {}",
            post.automaton.state_count(),
            post.automaton.transitions().len(),
            post.summaries.len(),
            post.stats.relaxations
        );
    }
    Ok(())
}

fn cmd_query(
    path: &Path,
    init: &[String],
    queries: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let rsm = load_rsm(path, err)?;
    let qs = parse_queries(&read(queries)?).map_err(Failure::from).map_err(with_context(queries))?;
    let post = saturate(&rsm, init)?;
    let a: &ConfigAutomaton<Value> = &post.automaton;
    let s = rsm.semiring();
    let mut maut = None;
    let mut nodes = None;
    let mut same = None;
    for q in &qs {
        let w = match q {
            Query::Config { node, stack } => {
                let stack: Vec<&str> = stack.iter().map(String::as_str).collect();
                config_distance(&rsm, a, &rsm.config(node, &stack)?)?
            }
            Query::Superconfig { node, modules } => {
                node_of_kind(&rsm, node)?;
                let modules: Vec<&str> = modules.iter().map(String::as_str).collect();
                let sc = rsm.superconfig(node, &modules)?;
                let m = maut.get_or_insert_with(|| superconfig_automaton(&rsm, a));
                superconfig_distance(&rsm, m, &sc)?
            }
            Query::Node { node } => {
                let u = node_of_kind(&rsm, node)?;
                *nodes.get_or_insert_with(|| node_distances(&rsm, a)).get(u)
            }
            Query::SameContext { node } => {
                let u = node_of_kind(&rsm, node)?;
                if same.is_none() {
                    same = Some(same_context_distances(&rsm)?);
                }
                *same.as_ref().expect("just computed").get(u)
            }
        };
        let _ = writeln!(out, "{} {} => {}", q.kind(), q.input(), show(s, &w));
    }
    Ok(())
}

fn cmd_oracle(
    path: &Path,
    init: &[String],
    queries: &Path,
    ceiling: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let rsm = load_rsm(path, err)?;
    let qs = parse_queries(&read(queries)?).map_err(Failure::from).map_err(with_context(queries))?;
    let s = rsm.semiring();
    let mut configs = Vec::with_capacity(qs.len());
    for q in &qs {
        let Query::Config { node, stack } = q else {
            return Err(Failure::Usage(format!("the oracle answers config queries only, found `{}`", q.kind())));
        };
        let stack: Vec<&str> = stack.iter().map(String::as_str).collect();
        configs.push(rsm.config(node, &stack)?);
    }
    let seeds: Vec<_> = initial_configs(&rsm, init)?.into_iter().map(|c| (c, s.one())).collect();
    let opts = OracleOptions { ceiling, ..OracleOptions::default() };
    let d = stabilized_distances(&rsm, &seeds, &configs, opts)?;
    for (q, c) in qs.iter().zip(&configs) {
        let _ = writeln!(out, "{} {} => {}", q.kind(), q.input(), show(s, &d.get(s, c)));
    }
    Ok(())
}

fn cmd_concurrent(
    path: &Path,
    k: usize,
    checks: &[String],
    max_height: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let doc = CrsmDocument::parse(&read(path)?).map_err(Failure::from).map_err(with_context(path))?;
    let crsm = Crsm::new(&doc.to_def()?)?;
    let reach = k_bounded_reach(&crsm, k)?;
    if checks.is_empty() {
        for g in enumerate_reachable(&crsm, &reach, max_height)? {
            let _ = writeln!(out, "{}", crsm.fmt_global_config(&g.locals));
        }
        return Ok(());
    }
    for text in checks {
        let locals = crsm.parse_global_config(text)?;
        let yes = is_global_config_reachable(&crsm, &reach, &locals)?;
        let verdict = if yes { "reachable" } else { "unreachable" };
        let _ = writeln!(out, "{} => {verdict}", crsm.fmt_global_config(&locals));
    }
    Ok(())
}

fn cmd_bench(sizes: &[usize], csv: Option<&Path>, reps: usize, out: &mut dyn Write) -> Result<(), Failure> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Failure::Usage("sizes must be positive".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        rows.push(dense_row(n, reps)?);
    }
    let text = to_csv(&rows);
    match csv {
        Some(p) => write(p, &text)?,
        None => {
            let _ = write!(out, "{text}");
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the subcommand, returning the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let result = match &cli.cmd {
        Cmd::Validate { rsm } => cmd_validate(rsm, out),
        Cmd::PostStar { rsm, init, out: o, dot } => cmd_post_star(rsm, init, o.as_deref(), dot.as_deref(), out, err),
        Cmd::Query { rsm, init, queries } => cmd_query(rsm, init, queries, out, err),
        Cmd::Concurrent { crsm, k, check, max_height } => cmd_concurrent(crsm, *k as usize, check, *max_height, out),
        Cmd::Oracle { rsm, init, queries, ceiling } => cmd_oracle(rsm, init, queries, *ceiling, out, err),
        Cmd::Bench { family: BenchFamily::Dense { sizes, csv, reps } } => cmd_bench(sizes, csv.as_deref(), *reps, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("wrsm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&[]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["concurrent", "x.json", "-k", "0"]).0, 2);
        assert_eq!(run_args(&["validate", "/nonexistent/file.json"]).0, 2);
    }

    #[test]
    fn help_succeeds() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("post-star"));
    }

    #[test]
    fn zero_size_bench_is_rejected() {
        assert_eq!(run_args(&["bench", "dense", "--sizes", "0"]).0, 2);
    }
}
