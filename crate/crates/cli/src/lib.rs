//! Command-line front-end for `flipwide-core`.
//!
//! Every subcommand writes its document to `-o` (stdout by default) and, with
//! `--report FILE`, a [`json::RunReport`] with the command line, the input
//! graph digest, timings and verdicts. Diagnostics go to stderr.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_USAGE`] (usage and IO errors),
//! [`EXIT_VERIFY`] (a verifier rejected the output) and [`EXIT_BUDGET`]
//! (budget exhausted or target missed; best-effort output is still written).

pub mod io;
pub mod json;

use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use flipwide_core::flipwide::{flip_widen, verify_flip_wide, FlipWideError, FlipWideRequest};
use flipwide_core::formulas::{eq_atoms, Atom, EvalContext};
use flipwide_core::generators::{complement, generate, power, Family};
use flipwide_core::indiscernibles::{
    extract_indiscernible, is_delta_indiscernible, Delta, ExtractError, ExtractionConfig, Sequence, Strategy,
};
use flipwide_core::oracles::{
    alternation_rank, exception_rank, order_property_witness, pairing_index_witness, shattering_witness,
    SearchConfig, SearchMode, SearchOutcome,
};
use flipwide_core::sampleset::{SampleBudget, SampleSetError};
use flipwide_core::{apply_flips, Error, Graph, Vertex};

use crate::io::{format_edge_list, read_graph, read_input, read_vertex_list, write_output, IoError};
use crate::json::{to_text, ResultJson, RunReport, Timing, ViolationJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable read as a parallelism hint. The implementation is
/// single-threaded; the value is only echoed in the run report.
pub const THREADS_ENV: &str = "FLIPWIDE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "flipwide", version, about = "Flip-wideness constructions and verifiers on finite graphs")]
struct Cli {
    /// Write a JSON run report (command, graph digest, timings, verdicts).
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph family as an edge list.
    Generate(GenerateArgs),
    /// Compute a flip set and a distance-r independent subset of A.
    FlipWiden(FlipWidenArgs),
    /// Extract a Δ-indiscernible subsequence.
    Extract(ExtractArgs),
    /// Re-check a flip-widen result against a graph.
    Verify(VerifyArgs),
    /// Witness searches and rank oracles.
    Diagnose(DiagnoseArgs),
    /// Apply the flips of a result to a graph.
    ApplyFlips(ApplyFlipsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyName {
    Clique,
    Edgeless,
    Matching,
    HalfGraph,
    StarForest,
    Path,
    Grid,
    SubdividedClique,
    ShatterGadget,
    RandomBoundedDegree,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    family: FamilyName,
    /// Size parameters: `n` for most families, `stars leaves` for star_forest,
    /// `width height` for grid, `k` for shatter_gadget, `n max_degree` for
    /// random_bounded_degree.
    #[arg(required = true)]
    params: Vec<usize>,
    /// Seed for random families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Complement the generated graph.
    #[arg(long)]
    complement: bool,
    /// Replace the graph by its p-th power (applied after --complement).
    #[arg(long, value_name = "P")]
    power: Option<usize>,
    #[arg(short = 'o', long, default_value = "-")]
    output: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyName {
    Ramsey,
    Best,
}

#[derive(Debug, Args)]
struct FlipWidenArgs {
    /// Edge-list file, `-` for stdin.
    #[arg(short = 'g', long, default_value = "-")]
    graph: String,
    /// `all` for A = V(G), otherwise a file with one vertex id per line.
    #[arg(short = 'A', long = "a-set", default_value = "all")]
    a_set: String,
    #[arg(short = 'r', long)]
    radius: usize,
    /// Minimum size of B.
    #[arg(short = 'm', long)]
    target: usize,
    #[arg(long, default_value_t = SampleBudget::default().max_samples)]
    max_samples: usize,
    #[arg(long, default_value_t = SampleBudget::default().max_rounds)]
    max_rounds: usize,
    #[arg(long, default_value_t = SampleBudget::default().min_surviving_length)]
    min_surviving: usize,
    /// Maximum pattern length for the extraction step.
    #[arg(long = "k", default_value_t = ExtractionConfig::default().max_pattern_length)]
    max_pattern_length: usize,
    #[arg(long, value_enum, default_value = "best")]
    strategy: StrategyName,
    #[arg(short = 'o', long, default_value = "-")]
    output: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhiName {
    Edge,
    Eq,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(short = 'g', long, default_value = "-")]
    graph: String,
    #[arg(long, value_enum)]
    phi: PhiName,
    /// Constants for `--phi eq`, comma separated.
    #[arg(long, value_delimiter = ',')]
    constants: Vec<Vertex>,
    /// Ball radius for the neighbourhood-equivalence atoms.
    #[arg(long, default_value_t = 1)]
    radius: usize,
    /// Maximum pattern length.
    #[arg(long = "k", default_value_t = 2)]
    k: usize,
    /// Required output length.
    #[arg(short = 'm', long, default_value_t = 1)]
    target: usize,
    /// Input sequence, one id per line; defaults to 0..n.
    #[arg(long)]
    seq: Option<String>,
    #[arg(long, value_enum, default_value = "best")]
    strategy: StrategyName,
    #[arg(short = 'o', long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(short = 'g', long, default_value = "-")]
    graph: String,
    /// Result JSON written by flip-widen.
    #[arg(long)]
    result: String,
    /// Radius to check; defaults to the radius stored in the result.
    #[arg(short = 'r', long)]
    radius: Option<usize>,
    #[arg(short = 'o', long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[arg(short = 'g', long, default_value = "-")]
    graph: String,
    /// Search for a k-order-property witness.
    #[arg(long, value_name = "K")]
    order: Option<usize>,
    /// Search for a k-shattering witness.
    #[arg(long, value_name = "K")]
    shatter: Option<usize>,
    /// Search for a pairing-index-k witness.
    #[arg(long, value_name = "K")]
    pairing: Option<usize>,
    /// Report alternation and exception rank of --seq.
    #[arg(long, requires = "seq")]
    alt_rank: bool,
    #[arg(long)]
    seq: Option<String>,
    /// Randomized restarts instead of exhaustive search.
    #[arg(long, value_name = "RESTARTS")]
    randomized: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search nodes (per restart in randomized mode).
    #[arg(long, default_value_t = SearchConfig::default().node_budget)]
    node_budget: u64,
    #[arg(short = 'o', long, default_value = "-")]
    output: String,
}

#[derive(Debug, Args)]
struct ApplyFlipsArgs {
    #[arg(short = 'g', long, default_value = "-")]
    graph: String,
    /// Result JSON (its `flips` field is used) or a bare JSON array of flips.
    #[arg(long)]
    flips: String,
    #[arg(short = 'o', long, default_value = "-")]
    output: String,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Budget { .. }) { EXIT_BUDGET } else { EXIT_USAGE };
        Self { code, message: e.to_string() }
    }
}

/// Bookkeeping shared by all subcommands; becomes the run report.
struct Session {
    started: Instant,
    timings: Vec<Timing>,
    graph_sha256: Option<String>,
    outputs: Value,
    verdicts: Map<String, Value>,
}

impl Session {
    fn new() -> Self {
        Self { started: Instant::now(), timings: Vec::new(), graph_sha256: None, outputs: Value::Null, verdicts: Map::new() }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        let millis = now.duration_since(self.started).as_secs_f64() * 1e3;
        self.timings.push(Timing { millis, phase: phase.to_owned() });
        self.started = now;
    }

    fn load_graph(&mut self, path: &str) -> Result<Graph, Failure> {
        let g = read_graph(path)?;
        self.graph_sha256 = Some(graph_digest(&g));
        self.lap("load");
        Ok(g)
    }

    fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.insert(name.to_owned(), Value::Bool(ok));
    }
}

/// SHA-256 of the canonical edge list, lowercase hex.
pub fn graph_digest(g: &Graph) -> String {
    Sha256::digest(format_edge_list(g).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut session = Session::new();
    let code = match dispatch(&cli.command, &mut session) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("flipwide: {}", f.message);
            f.code
        }
    };
    if let Some(path) = &cli.report {
        let report = RunReport {
            command: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
            exit_code: code,
            graph_sha256: session.graph_sha256,
            outputs: session.outputs,
            threads_hint: std::env::var(THREADS_ENV).ok(),
            timings: session.timings,
            verdicts: session.verdicts,
        };
        if let Err(e) = write_output(path, &to_text(&report)) {
            eprintln!("flipwide: {e}");
            return if code == EXIT_OK { EXIT_USAGE } else { code };
        }
    }
    code
}

fn dispatch(cmd: &Command, s: &mut Session) -> Result<i32, Failure> {
    match cmd {
        Command::Generate(a) => cmd_generate(a, s),
        Command::FlipWiden(a) => cmd_flip_widen(a, s),
        Command::Extract(a) => cmd_extract(a, s),
        Command::Verify(a) => cmd_verify(a, s),
        Command::Diagnose(a) => cmd_diagnose(a, s),
        Command::ApplyFlips(a) => cmd_apply_flips(a, s),
    }
}

fn family_spec(name: FamilyName, params: &[usize], seed: u64) -> Result<Family, Failure> {
    let want = match name {
        FamilyName::StarForest | FamilyName::Grid | FamilyName::RandomBoundedDegree => 2,
        _ => 1,
    };
    if params.len() != want {
        return Err(Failure::usage(format!(
            "{} takes {want} size parameter(s), got {}",
            name.to_possible_value().expect("named family").get_name(),
            params.len()
        )));
    }
    let (p, q) = (params[0], params.get(1).copied().unwrap_or(0));
    Ok(match name {
        FamilyName::Clique => Family::Clique { n: p },
        FamilyName::Edgeless => Family::Edgeless { n: p },
        FamilyName::Matching => Family::Matching { n: p },
        FamilyName::HalfGraph => Family::HalfGraph { n: p },
        FamilyName::StarForest => Family::StarForest { stars: p, leaves: q },
        FamilyName::Path => Family::Path { n: p },
        FamilyName::Grid => Family::Grid { width: p, height: q },
        FamilyName::SubdividedClique => Family::SubdividedClique { n: p },
        FamilyName::ShatterGadget => Family::ShatterGadget { k: p },
        FamilyName::RandomBoundedDegree => Family::RandomBoundedDegree { n: p, max_degree: q, seed },
    })
}

fn cmd_generate(a: &GenerateArgs, s: &mut Session) -> Result<i32, Failure> {
    let mut g = generate(&family_spec(a.family, &a.params, a.seed)?)?;
    if a.complement {
        g = complement(&g);
    }
    if let Some(p) = a.power {
        g = power(&g, p)?;
    }
    s.graph_sha256 = Some(graph_digest(&g));
    s.lap("generate");
    s.outputs = json!({ "edges": g.edge_count(), "vertices": g.n() });
    write_output(&a.output, &format_edge_list(&g))?;
    Ok(EXIT_OK)
}

fn strategy(name: StrategyName) -> Strategy {
    match name {
        StrategyName::Ramsey => Strategy::GreedyRamsey,
        StrategyName::Best => Strategy::BestOf,
    }
}

fn read_sequence(path: Option<&str>, g: &Graph) -> Result<Sequence, Failure> {
    let items = match path {
        None | Some("all") => (0..g.n()).collect(),
        Some(p) => read_vertex_list(p)?,
    };
    for &v in &items {
        g.check_vertex(v)?;
    }
    Ok(Sequence::new(items)?)
}

fn cmd_flip_widen(a: &FlipWidenArgs, s: &mut Session) -> Result<i32, Failure> {
    let g = s.load_graph(&a.graph)?;
    let a_set = read_sequence(Some(&a.a_set), &g)?;
    let mut req = FlipWideRequest::new(&g, a_set, a.radius, a.target);
    req.budget = SampleBudget {
        max_samples: a.max_samples,
        max_rounds: a.max_rounds,
        min_surviving_length: a.min_surviving,
    };
    req.extraction.max_pattern_length = a.max_pattern_length;
    req.extraction.strategy = strategy(a.strategy);
    let outcome = flip_widen(&req);
    s.lap("flip_widen");
    let (res, mut code) = match outcome {
        Ok(res) => (res, EXIT_OK),
        Err(FlipWideError::Shortfall { target, result }) => {
            eprintln!("flipwide: only {} of the requested {target} vertices survived", result.b_set.len());
            (*result, EXIT_BUDGET)
        }
        Err(FlipWideError::Input(e)) => return Err(e.into()),
        Err(FlipWideError::SampleSet { level, source }) => {
            let code = match &source {
                SampleSetError::Input(e) => Failure::from(e.clone()).code,
                _ => EXIT_BUDGET,
            };
            if let Some(p) = source.partial() {
                s.outputs = json!({
                    "level": level,
                    "samples": json::sorted(p.samples.clone()),
                    "survivors": json::sorted(p.survivors.as_slice().to_vec()),
                    "undecomposed": json::sorted(p.undecomposed.clone()),
                });
            }
            return Err(Failure { code, message: format!("level {level}: {source}") });
        }
        Err(e @ FlipWideError::Invariant { .. }) => {
            return Err(Failure { code: EXIT_VERIFY, message: e.to_string() });
        }
    };
    let violation = res.verify(&g, a.radius);
    s.lap("verify");
    let verified = violation.is_none();
    s.verdict("flip_wide", verified);
    s.verdict("target_met", res.b_set.len() >= a.target);
    if let Some(v) = &violation {
        eprintln!("flipwide: result failed verification: {:?}", v);
        code = EXIT_VERIFY;
    }
    let doc = ResultJson::new(&res, a.radius, verified);
    s.outputs = json!({ "b_size": doc.b_set.len(), "flip_count": doc.flips.len(), "target": a.target });
    write_output(&a.output, &to_text(&doc))?;
    Ok(code)
}

fn cmd_extract(a: &ExtractArgs, s: &mut Session) -> Result<i32, Failure> {
    let g = s.load_graph(&a.graph)?;
    let seq = read_sequence(a.seq.as_deref(), &g)?;
    let phi = match a.phi {
        PhiName::Edge => vec![Atom::Edge],
        PhiName::Eq if a.constants.is_empty() => return Err(Failure::usage("--phi eq needs --constants")),
        PhiName::Eq => eq_atoms(a.constants.len()),
    };
    let ctx = EvalContext::new(&g, a.constants.clone(), a.radius)?;
    let delta = Delta::type_patterns(phi, a.k);
    let cfg = ExtractionConfig {
        target_length: a.target,
        max_pattern_length: a.k,
        strategy: strategy(a.strategy),
        ..ExtractionConfig::default()
    };
    let (out, code) = match extract_indiscernible(&ctx, &delta, &seq, &cfg) {
        Ok(out) => (out, EXIT_OK),
        Err(ExtractError::Shortfall { achieved, target, .. }) => {
            eprintln!("flipwide: extraction reached only {} of the requested {target} elements", achieved.len());
            (achieved, EXIT_BUDGET)
        }
        Err(ExtractError::Input(e)) => return Err(e.into()),
    };
    s.lap("extract");
    let counterexample = is_delta_indiscernible(&ctx, &delta, &out)?;
    s.lap("verify");
    let indiscernible = counterexample.is_none();
    s.verdict("indiscernible", indiscernible);
    let doc = json!({
        "indiscernible": indiscernible,
        "length": out.len(),
        "sequence": out.as_slice(),
        "target": a.target,
    });
    s.outputs = json!({ "length": out.len() });
    write_output(&a.output, &to_text(&doc))?;
    Ok(if indiscernible { code } else { EXIT_VERIFY })
}

fn cmd_verify(a: &VerifyArgs, s: &mut Session) -> Result<i32, Failure> {
    let g = s.load_graph(&a.graph)?;
    let text = read_input(&a.result)?;
    let doc: ResultJson =
        serde_json::from_str(&text).map_err(|source| IoError::Json { path: a.result.clone(), source })?;
    let radius = a.radius.unwrap_or(doc.radius);
    let violation = verify_flip_wide(&g, &doc.b_set, &doc.flips(), radius);
    s.lap("verify");
    let verified = violation.is_none();
    s.verdict("flip_wide", verified);
    if let Some(v) = &violation {
        eprintln!("flipwide: verification failed: {:?}", v);
    }
    let out = json!({
        "embedded_verified": doc.verified,
        "radius": radius,
        "verified": verified,
        "violation": violation.as_ref().map(ViolationJson::new),
    });
    s.outputs = out.clone();
    write_output(&a.output, &to_text(&out))?;
    Ok(if verified { EXIT_OK } else { EXIT_VERIFY })
}

fn witness_json(outcome: &SearchOutcome, g: &Graph) -> (Value, bool) {
    let valid = outcome.witness.as_ref().is_none_or(|w| w.validate(g));
    let witness = outcome.witness.as_ref().map(|w| json!({ "left": w.left, "right": w.right, "valid": valid }));
    let v = json!({
        "complete": outcome.complete,
        "found": outcome.witness.is_some(),
        "nodes": outcome.nodes,
        "witness": witness,
    });
    (v, valid)
}

fn cmd_diagnose(a: &DiagnoseArgs, s: &mut Session) -> Result<i32, Failure> {
    let g = s.load_graph(&a.graph)?;
    let mode = match a.randomized {
        Some(restarts) => SearchMode::Randomized { seed: a.seed, restarts },
        None => SearchMode::Exhaustive,
    };
    let cfg = SearchConfig { node_budget: a.node_budget, mode, ..SearchConfig::default() };
    type Search = fn(&Graph, usize, &SearchConfig) -> flipwide_core::Result<SearchOutcome>;
    let searches: [(&str, Option<usize>, Search); 3] = [
        ("order", a.order, order_property_witness),
        ("shatter", a.shatter, shattering_witness),
        ("pairing", a.pairing, pairing_index_witness),
    ];
    let mut doc = Map::new();
    let mut code = EXIT_OK;
    for (name, k, search) in searches {
        let Some(k) = k else { continue };
        let outcome = search(&g, k, &cfg)?;
        s.lap(name);
        let (mut v, valid) = witness_json(&outcome, &g);
        v["k"] = json!(k);
        s.verdict(&format!("{name}_witness_valid"), valid);
        if !valid {
            code = EXIT_VERIFY;
        } else if outcome.witness.is_none() && !outcome.complete && code == EXIT_OK {
            eprintln!("flipwide: {name} search stopped without a proof of absence");
            code = EXIT_BUDGET;
        }
        doc.insert(name.to_owned(), v);
    }
    if a.alt_rank {
        let seq = read_sequence(a.seq.as_deref(), &g)?;
        let alt = alternation_rank(&g, seq.as_slice());
        let exc = exception_rank(&g, seq.as_slice());
        s.lap("ranks");
        for (name, w) in [("alternation_rank", alt), ("exception_rank", exc)] {
            doc.insert(name.to_owned(), json!({ "indices": w.indices, "rank": w.rank, "vertex": w.vertex }));
        }
    }
    if doc.is_empty() {
        return Err(Failure::usage("diagnose needs at least one of --order, --shatter, --pairing, --alt-rank"));
    }
    let doc = Value::Object(doc);
    s.outputs = doc.clone();
    write_output(&a.output, &to_text(&doc))?;
    Ok(code)
}

fn cmd_apply_flips(a: &ApplyFlipsArgs, s: &mut Session) -> Result<i32, Failure> {
    let g = s.load_graph(&a.graph)?;
    let text = read_input(&a.flips)?;
    let parsed: Value = serde_json::from_str(&text).map_err(|source| IoError::Json { path: a.flips.clone(), source })?;
    let list = match parsed {
        Value::Object(mut m) => m.remove("flips").unwrap_or(Value::Null),
        other => other,
    };
    let flips: Vec<json::FlipJson> =
        serde_json::from_value(list).map_err(|source| IoError::Json { path: a.flips.clone(), source })?;
    let flips: Vec<_> = flips.iter().map(json::FlipJson::to_flip).collect();
    let h = apply_flips(&g, &flips)?;
    s.lap("apply");
    s.outputs = json!({ "edges": h.edge_count(), "flips": flips.len(), "vertices": h.n() });
    write_output(&a.output, &format_edge_list(&h))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parameter_counts() {
        assert!(family_spec(FamilyName::Clique, &[5], 0).is_ok());
        assert!(family_spec(FamilyName::StarForest, &[5], 0).is_err());
        assert_eq!(
            family_spec(FamilyName::RandomBoundedDegree, &[60, 3], 42).unwrap(),
            Family::RandomBoundedDegree { n: 60, max_degree: 3, seed: 42 }
        );
    }

    #[test]
    fn digest_is_stable() {
        let g = flipwide_core::generators::clique(3);
        assert_eq!(graph_digest(&g), graph_digest(&g.clone()));
        assert_eq!(graph_digest(&g).len(), 64);
        assert_ne!(graph_digest(&g), graph_digest(&Graph::empty(3)));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["flipwide", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["flipwide", "generate", "clique"]), EXIT_USAGE);
        assert_eq!(run(["flipwide", "--help"]), EXIT_OK);
    }
}
