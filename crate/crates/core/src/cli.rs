//! The `tpc` command line.
//!
//! Every command writes one JSON document (keys sorted) to standard output,
//! except `export --format dot`. Exit status is 0 on success, 2 when the
//! answer is mathematically negative (a failed verification, an impossible
//! construction, a `TPC-impossible` report) and 1 on usage or input errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bitset::BitSet;
use crate::cayley::{build_from_connection_set, close_connection_set, is_connected, CayleyGraph, ConnectionSet};
use crate::codes::{
    check_abelian_condition, check_matching_structure, check_normal_subgroup_code, check_theorem_pseudo,
    check_translates, verify_tpc,
};
use crate::error::{Error, Result};
use crate::gf2::{
    construct_cubelike_tpc, coset_family, random_spanning_set, verify_linear_code, GF2Matrix, LinearCode,
};
use crate::group::{is_conjugation_closed, is_normal, is_subgroup, make_group, Group, GroupJson, VertexSet};
use crate::search::{find_subgroup_tpcs, find_tpc_partition, find_tpcs, SearchMode, SearchOptions};
use crate::spectral::full_report;

/// Largest list of codewords printed by `cubelike`.
const PRINT_LIMIT: usize = 4096;

#[derive(Parser, Debug)]
#[command(name = "tpc", version, about = "Total perfect codes in Cayley graphs")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "TPC_THREADS")]
    pub threads: Option<usize>,
    /// Check associativity of the group before use (O(n³)).
    #[arg(long, global = true)]
    pub check_assoc: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a set is a total perfect code.
    Verify(VerifyArgs),
    /// Search for total perfect codes.
    Search(SearchArgs),
    /// Build a linear total perfect code in Cay(Z₂ⁿ, S).
    Cubelike(CubelikeArgs),
    /// Spectral and divisibility necessary conditions.
    Report(ReportArgs),
    /// Export a graph or group.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// cyclic:n, elem2:k, dihedral:n, sym:n, product:(A),(B) or json:<path>
    #[arg(long)]
    pub group: String,
    /// Comma-separated connection set elements.
    #[arg(long)]
    pub conn: String,
    /// Close the connection set before use.
    #[arg(long, value_enum, default_value_t = Closure::None)]
    pub close: Closure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Closure {
    None,
    Inverse,
    Conjugation,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated code elements.
    #[arg(long, allow_hyphen_values = true)]
    pub code: String,
    /// Also run every applicable characterization and check agreement.
    #[arg(long)]
    pub crosscheck: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Mode::All)]
    pub mode: Mode,
    /// Stop after this many codes.
    #[arg(long)]
    pub limit: Option<usize>,
    /// One code per right-translation orbit.
    #[arg(long)]
    pub canonical: bool,
    /// Also look for a partition of the vertex set into codes.
    #[arg(long)]
    pub partition: bool,
    /// Also list the normal subgroups that are codes.
    #[arg(long)]
    pub subgroups: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    First,
    All,
    Count,
}

#[derive(Args, Debug)]
pub struct CubelikeArgs {
    /// Dimension of Z₂ⁿ.
    #[arg(long)]
    pub n: usize,
    /// Comma-separated bit-strings of length n, or random:t for 2^t random vectors.
    #[arg(long)]
    pub conn: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use this check matrix (comma-separated rows) instead of constructing one.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Generators of a subgroup H for nec-b; default: all normal and cyclic subgroups.
    #[arg(long)]
    pub subgroup: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    pub group: String,
    /// Required for dot and json.
    #[arg(long)]
    pub conn: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Closure::None)]
    pub close: Closure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
    Group,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(value: &Value, negative: bool) -> Outcome {
        let mut stdout = serde_json::to_string(value).expect("values serialize");
        stdout.push('\n');
        Outcome { code: if negative { 2 } else { 0 }, stdout, stderr: String::new() }
    }

    fn error(message: impl std::fmt::Display) -> Outcome {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Parses `args` (including the program name) and runs the job.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads.filter(|&t| t > 0) {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome::error(e),
    };
    pool.install(|| match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome::error(e),
    })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify(a) => verify(cli, a),
        Command::Search(a) => search(cli, a),
        Command::Cubelike(a) => cubelike(a),
        Command::Report(a) => report(cli, a),
        Command::Export(a) => export(cli, a),
    }
}

/// Group spec, or `json:<path>` for a table in the JSON group format.
pub fn load_group(spec: &str, check_assoc: bool) -> Result<Group> {
    let g = match spec.strip_prefix("json:") {
        Some(path) => {
            let path = PathBuf::from(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::MalformedSpec { spec: spec.into(), reason: e.to_string() })?;
            let json: GroupJson = serde_json::from_str(&text)
                .map_err(|e| Error::MalformedSpec { spec: spec.into(), reason: e.to_string() })?;
            Group::from_json(&json)?
        }
        None => make_group(spec)?,
    };
    if check_assoc {
        if let Err((a, b, c)) = g.check_associativity() {
            return Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
        }
    }
    Ok(g)
}

fn parse_set(g: &Group, text: &str) -> Result<VertexSet> {
    g.set_of(&g.parse_elements(text)?)
}

fn connection_set(g: &Group, text: &str, close: Closure) -> Result<ConnectionSet> {
    let seed = parse_set(g, text)?;
    match close {
        Closure::None => ConnectionSet::new(g, seed),
        Closure::Inverse => close_connection_set(g, &seed, false),
        Closure::Conjugation => close_connection_set(g, &seed, true),
    }
}

fn load_graph(cli: &Cli, a: &GraphArgs) -> Result<CayleyGraph> {
    let g = load_group(&a.group, cli.check_assoc)?;
    let conn = connection_set(&g, &a.conn, a.close)?;
    Ok(build_from_connection_set(&g, conn))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Outcome> {
    let graph = load_graph(cli, &a.graph)?;
    let g = graph.group();
    let c = parse_set(g, &a.code)?;
    let verdict = verify_tpc(&graph, &c);
    let mut out = to_value(&verdict);
    if a.crosscheck {
        let (checks, agree) = crosscheck(&graph, &c, verdict.ok)?;
        if !agree {
            return Err(Error::InternalInvariantViolated(format!("characterizations disagree: {checks}")));
        }
        out["crosscheck"] = checks;
    }
    Ok(Outcome::json(&out, !verdict.ok))
}

/// Runs every characterization that applies to `(G, S, C)`; the flag is
/// whether they all agree with `expected`.
fn crosscheck(graph: &CayleyGraph, c: &VertexSet, expected: bool) -> Result<(Value, bool)> {
    let g = graph.group();
    let s = graph.connection_set().set();
    let mut checks = serde_json::Map::new();
    let mut agree = true;
    let matching = check_matching_structure(graph, c);
    agree &= matching.verdict.ok == expected;
    checks.insert("matching".into(), to_value(&matching));
    if is_conjugation_closed(g, c) {
        let v = check_theorem_pseudo(g, s, c)?;
        agree &= v.ok == expected;
        checks.insert("conjugation_closed_code".into(), to_value(&v));
    }
    if g.is_abelian() {
        let v = check_abelian_condition(g, s, c)?;
        agree &= v.ok == expected;
        checks.insert("abelian".into(), to_value(&v));
    }
    if is_subgroup(g, c) && is_normal(g, c)? {
        let v = check_normal_subgroup_code(g, s, c)?;
        agree &= v.verdict.ok == expected;
        checks.insert("normal_subgroup".into(), to_value(&v));
    }
    if expected {
        let t = check_translates(graph, c)?;
        agree &= t.right_translates_are_codes.ok && t.left_translates_partition.ok;
        agree &= t.right_translates_partition.as_ref().is_none_or(|v| v.ok);
        checks.insert("translates".into(), to_value(&t));
    }
    Ok((Value::Object(checks), agree))
}

fn search(cli: &Cli, a: &SearchArgs) -> Result<Outcome> {
    let graph = load_graph(cli, &a.graph)?;
    let mode = match a.mode {
        Mode::First => SearchMode::First,
        Mode::All => SearchMode::All,
        Mode::Count => SearchMode::Count,
    };
    let opts = SearchOptions { mode, limit: a.limit, canonical: a.canonical, parallel: true };
    let result = find_tpcs(&graph, &opts);
    let mut out = json!({ "count": result.count });
    if mode != SearchMode::Count {
        out["solutions"] = json!(result.solutions.iter().map(VertexSet::to_vec).collect::<Vec<_>>());
    }
    if result.limit_reached() {
        out["limit_reached"] = json!(true);
    }
    if a.partition {
        let parts = find_tpc_partition(&graph);
        out["partition"] = json!(parts.map(|p| p.iter().map(VertexSet::to_vec).collect::<Vec<_>>()));
    }
    if a.subgroups {
        let subs = find_subgroup_tpcs(&graph)?;
        out["subgroup_codes"] = json!(subs.iter().map(VertexSet::to_vec).collect::<Vec<_>>());
    }
    Ok(Outcome::json(&out, false))
}

fn parse_vectors(n: usize, text: &str) -> Result<Vec<BitSet>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match BitSet::from_bit_string(t) {
            Some(v) if v.universe() == n => Ok(v),
            _ => Err(Error::InvalidVectors(format!("`{t}` is not a bit-string of length {n}"))),
        })
        .collect()
}

fn bit_strings(n: usize, set: &VertexSet) -> Vec<String> {
    set.iter().map(|x| BitSet::from_u64(n, x as u64).to_bit_string()).collect()
}

fn cubelike(a: &CubelikeArgs) -> Result<Outcome> {
    let n = a.n;
    let s = match a.conn.strip_prefix("random:") {
        Some(t) => {
            let t: u32 = t
                .parse()
                .map_err(|_| Error::InvalidVectors(format!("cannot parse `{}`", a.conn)))?;
            random_spanning_set(n, t, a.seed)?
        }
        None => parse_vectors(n, &a.conn)?,
    };
    let conn: Vec<String> = s.iter().map(BitSet::to_bit_string).collect();
    let code = match &a.matrix {
        Some(rows) => {
            let rows: Vec<&str> = rows.split(',').map(str::trim).collect();
            let m = GF2Matrix::from_bit_strings(&rows)?;
            if m.rows() != n {
                return Err(Error::InvalidVectors(format!("check matrix has {} rows, not {n}", m.rows())));
            }
            LinearCode::from_check_matrix(m)
        }
        None => match construct_cubelike_tpc(n, &s, a.seed) {
            Ok(code) => code,
            Err(e @ (Error::DegreeNotPowerOfTwo { .. } | Error::ConstructionExhausted)) => {
                let out = json!({ "ok": false, "n": n, "conn": conn, "reason": e.to_string() });
                return Ok(Outcome::json(&out, true));
            }
            Err(e) => return Err(e),
        },
    };
    let verdict = verify_linear_code(&code, &s)?;
    let mut out = to_value(&verdict);
    out["n"] = json!(n);
    out["conn"] = json!(conn);
    out["check_matrix"] = json!(code.check_matrix().to_bit_strings());
    out["code_dimension"] = json!(code.log_size());
    if n <= 64 {
        out["kernel_basis"] = json!(code.kernel_basis().iter().map(BitSet::to_bit_string).collect::<Vec<_>>());
    }
    if let Some(words) = code.codewords().filter(|w| w.len() <= PRINT_LIMIT) {
        out["codewords"] = json!(bit_strings(n, words));
        if verdict.ok && words.len() * s.len() <= PRINT_LIMIT {
            let fam = coset_family(&code, &s)?;
            out["cosets"] = json!(fam.iter().map(|c| bit_strings(n, c)).collect::<Vec<_>>());
        }
    }
    if n <= 12 {
        let g = make_group(&format!("elem2:{n}"))?;
        let set = g.set_of(&s.iter().map(|u| u.to_u64() as usize).collect::<Vec<_>>())?;
        out["connected"] = json!(is_connected(&build_from_connection_set(&g, ConnectionSet::new(&g, set)?)));
    }
    Ok(Outcome::json(&out, !verdict.ok))
}

fn report(cli: &Cli, a: &ReportArgs) -> Result<Outcome> {
    let graph = load_graph(cli, &a.graph)?;
    let h = match &a.subgroup {
        Some(text) => Some(crate::group::closure(graph.group(), &parse_set(graph.group(), text)?)),
        None => None,
    };
    let reports = full_report(&graph, h.as_ref())?;
    let negative = reports.iter().any(|r| r.is_impossible());
    Ok(Outcome::json(&to_value(&reports), negative))
}

fn export(cli: &Cli, a: &ExportArgs) -> Result<Outcome> {
    let g = load_group(&a.group, cli.check_assoc)?;
    if a.format == Format::Group {
        return Ok(Outcome::json(&to_value(&g.to_json()), false));
    }
    let Some(conn) = &a.conn else {
        return Err(Error::MalformedElements("--conn is required for this format".into()));
    };
    let graph = build_from_connection_set(&g, connection_set(&g, conn, a.close)?);
    Ok(match a.format {
        Format::Dot => Outcome { code: 0, stdout: graph.to_dot(), stderr: String::new() },
        _ => Outcome::json(&to_value(&graph.to_json()), false),
    })
}
