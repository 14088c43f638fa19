//! The `sugeno` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with what should go to stdout and stderr. Exit code 0 means
//! the value was computed or the property holds, 1 that a property is
//! violated, 2 an input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::capacity::Capacity;
use crate::chain::{Chain, FiniteChain};
use crate::check_property;
use crate::congruence::{verify_proposition1, verify_theorem1};
use crate::json::{
    capacity_from_json, epimorphism_from_json, table_from_json, vector_from_json, vector_strings, CapacityJson,
    CounterexampleJson, TableJson,
};
use crate::scale::{map_through, verify_theorem2, Epimorphism, BUILTIN_NAMES};
use crate::sugeno::{recognize_sugeno, sugeno_eval, sugeno_table, Counterexample, Formula, Property, ScoreVector};
use crate::table::{AggregationTable, DEFAULT_ENUM_GRID, DEFAULT_TABLE_GRID};

pub const MAX_GRID_ENV: &str = "SUGENO_MAX_GRID";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sugeno", version, about = "Discrete Sugeno integrals over bounded chains")]
struct Cli {
    /// Emit the run report as one JSON document.
    #[arg(long, global = true)]
    json: bool,
    /// Include the wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the Sugeno integral of an input vector.
    Eval {
        #[arg(long)]
        capacity: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = FormulaArg::Sorted)]
        formula: FormulaArg,
    },
    /// Materialize the Sugeno table of a capacity on a finite chain.
    Table {
        #[arg(long)]
        capacity: PathBuf,
    },
    /// Run recognizers on an aggregation table.
    Check {
        #[arg(long)]
        table: PathBuf,
        /// Properties to check; defaults to the four axioms.
        #[arg(long = "axiom", value_delimiter = ',')]
        axioms: Vec<Property>,
    },
    /// Decide whether a table is a Sugeno integral and extract its capacity.
    Recognize {
        #[arg(long)]
        table: PathBuf,
    },
    /// Push a capacity and an input through an epimorphism.
    Map {
        /// A built-in name or a JSON file.
        #[arg(long)]
        epi: String,
        #[arg(long)]
        capacity: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Exhaustively verify a characterization on small chains.
    Verify {
        #[arg(value_enum)]
        theorem: TheoremArg,
        #[arg(long, default_value_t = 3)]
        chain_size: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Comma-separated value literals.
    #[arg(long, conflicts_with = "input_file", allow_hyphen_values = true)]
    input: Option<String>,
    /// A JSON array of value literals.
    #[arg(long)]
    input_file: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormulaArg {
    Level,
    Subset,
    Sorted,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TheoremArg {
    Theorem1,
    Theorem2,
    Prop1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Fail,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok => EXIT_OK,
            Verdict::Fail => EXIT_VIOLATED,
            Verdict::Error => EXIT_INPUT,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Done {
    verdict: Verdict,
    payload: Value,
    text: String,
}

impl Done {
    fn new(holds: bool, payload: Value, text: String) -> Self {
        Done {
            verdict: if holds { Verdict::Ok } else { Verdict::Fail },
            payload,
            text,
        }
    }
}

/// Runs the command line `args` (program name first). `max_grid` is the
/// raw value of the grid-cap environment variable, if set.
pub fn run<I, T>(args: I, max_grid: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let command = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let result = parse_max_grid(max_grid).and_then(|grid| dispatch(&cli.command, grid));
    let elapsed = start.elapsed().as_millis();
    let (verdict, payload, text) = match result {
        Ok(done) => (done.verdict, done.payload, done.text),
        Err(msg) => (Verdict::Error, json!({ "error": msg }), msg),
    };
    let report = RunReport {
        command,
        verdict,
        payload,
        wall_time_ms: cli.timing.then_some(elapsed),
    };
    let mut out = Outcome {
        code: verdict.exit_code(),
        stdout: String::new(),
        stderr: String::new(),
    };
    if cli.json {
        out.stdout = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    } else if verdict == Verdict::Error {
        out.stderr = format!("error: {text}\n");
    } else {
        out.stdout = text;
        if !out.stdout.ends_with('\n') {
            out.stdout.push('\n');
        }
    }
    if cli.timing && !cli.json {
        let _ = writeln!(out.stderr, "wall time: {elapsed} ms");
    }
    out
}

fn parse_max_grid(raw: Option<&str>) -> Result<usize, String> {
    match raw {
        None => Ok(DEFAULT_ENUM_GRID),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!("{MAX_GRID_ENV} must be a positive integer, got {s:?}")),
        },
    }
}

fn dispatch(command: &Command, max_grid: usize) -> Result<Done, String> {
    match command {
        Command::Eval {
            capacity,
            input,
            formula,
        } => cmd_eval(capacity, input, *formula),
        Command::Table { capacity } => cmd_table(capacity),
        Command::Check { table, axioms } => cmd_check(table, axioms),
        Command::Recognize { table } => cmd_recognize(table),
        Command::Map { epi, capacity, input } => cmd_map(epi, capacity, input),
        Command::Verify {
            theorem,
            chain_size,
            arity,
        } => cmd_verify(*theorem, *chain_size, *arity, max_grid),
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_capacity(path: &Path) -> Result<Capacity, String> {
    capacity_from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_table(path: &Path) -> Result<AggregationTable, String> {
    table_from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_input(chain: &Chain, input: &InputArgs) -> Result<ScoreVector, String> {
    match (&input.input, &input.input_file) {
        (Some(csv), None) => ScoreVector::parse(chain, csv).map_err(|e| format!("--input: {e}")),
        (None, Some(path)) => vector_from_json(chain, &read(path)?).map_err(|e| format!("{}: {e}", path.display())),
        _ => Err("one of --input or --input-file is required".into()),
    }
}

fn load_epimorphism(reference: &str, capacity: &Capacity) -> Result<Epimorphism, String> {
    if reference == "identity" {
        return Ok(Epimorphism::identity(capacity.chain()));
    }
    if BUILTIN_NAMES.contains(&reference) {
        return Epimorphism::builtin(reference).map_err(|e| e.to_string());
    }
    let path = Path::new(reference);
    if !path.is_file() {
        return Err(format!(
            "{reference:?} is neither a built-in epimorphism ({}) nor a file",
            BUILTIN_NAMES.join(", ")
        ));
    }
    epimorphism_from_json(&read(path)?).map_err(|e| format!("{reference}: {e}"))
}

fn capacity_line(c: &Capacity) -> String {
    CapacityJson::from(c)
        .values
        .0
        .iter()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn capacity_value(c: &Capacity) -> Value {
    serde_json::to_value(CapacityJson::from(c)).expect("capacity serializes")
}

fn counterexample_value(c: &Counterexample) -> Value {
    serde_json::to_value(CounterexampleJson::from(c)).expect("counterexample serializes")
}

fn cmd_eval(capacity: &Path, input: &InputArgs, formula: FormulaArg) -> Result<Done, String> {
    let m = load_capacity(capacity)?;
    let x = load_input(m.chain(), input)?;
    let eval = |f| sugeno_eval(&m, &x, f).map_err(|e| e.to_string());
    let single = match formula {
        FormulaArg::Level => Some(Formula::Level),
        FormulaArg::Subset => Some(Formula::Subset),
        FormulaArg::Sorted => Some(Formula::Sorted),
        FormulaArg::All => None,
    };
    if let Some(f) = single {
        let v = eval(f)?.to_string();
        return Ok(Done::new(true, json!({ "formula": f.name(), "value": v }), v));
    }
    let mut values = serde_json::Map::new();
    let mut text = String::new();
    let mut seen = Vec::new();
    for f in Formula::ALL {
        let v = eval(f)?.to_string();
        let _ = writeln!(text, "{}: {v}", f.name());
        values.insert(f.name().into(), Value::String(v.clone()));
        seen.push(v);
    }
    let agree = seen.windows(2).all(|w| w[0] == w[1]);
    if !agree {
        text.push_str("formulas disagree\n");
    }
    Ok(Done::new(agree, json!({ "values": values, "agree": agree }), text))
}

fn cmd_table(capacity: &Path) -> Result<Done, String> {
    let m = load_capacity(capacity)?;
    let Chain::Finite(chain) = m.chain() else {
        return Err("a table needs a capacity on a finite chain".into());
    };
    let t = sugeno_table(&m, chain, DEFAULT_TABLE_GRID).map_err(|e| e.to_string())?;
    let doc = TableJson::from(&t);
    let text = serde_json::to_string_pretty(&doc).expect("table serializes");
    Ok(Done::new(
        true,
        serde_json::to_value(doc).expect("table serializes"),
        text,
    ))
}

const DEFAULT_AXIOMS: [Property; 4] = [
    Property::Idempotent,
    Property::ComonotoneMaxitive,
    Property::MinHomogeneous,
    Property::MedianDecomposable,
];

fn cmd_check(table: &Path, axioms: &[Property]) -> Result<Done, String> {
    let t = load_table(table)?;
    let axioms = if axioms.is_empty() { &DEFAULT_AXIOMS[..] } else { axioms };
    let mut results = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for &p in axioms {
        match check_property(&t, p).map_err(|e| e.to_string())? {
            Ok(()) => {
                let _ = writeln!(text, "{p}: holds");
                results.push(json!({ "property": p.name(), "holds": true }));
            }
            Err(cx) => {
                all = false;
                let _ = writeln!(text, "{p}: {cx}");
                results.push(json!({
                    "property": p.name(),
                    "holds": false,
                    "counterexample": counterexample_value(&cx),
                }));
            }
        }
    }
    let mut payload = json!({ "results": results });
    if all {
        match recognize_sugeno(&t) {
            Ok(m) => {
                let _ = writeln!(text, "capacity: {}", capacity_line(&m));
                payload["capacity"] = capacity_value(&m);
            }
            Err(cx) => {
                let _ = writeln!(text, "not a sugeno integral: {cx}");
                payload["sugeno"] = counterexample_value(&cx);
            }
        }
    }
    Ok(Done::new(all, payload, text))
}

fn cmd_recognize(table: &Path) -> Result<Done, String> {
    let t = load_table(table)?;
    Ok(match recognize_sugeno(&t) {
        Ok(m) => Done::new(
            true,
            json!({ "sugeno": true, "capacity": capacity_value(&m) }),
            format!("sugeno integral\ncapacity: {}\n", capacity_line(&m)),
        ),
        Err(cx) => Done::new(
            false,
            json!({ "sugeno": false, "counterexample": counterexample_value(&cx) }),
            format!("not a sugeno integral: {cx}\n"),
        ),
    })
}

fn cmd_map(epi: &str, capacity: &Path, input: &InputArgs) -> Result<Done, String> {
    let m = load_capacity(capacity)?;
    let phi = load_epimorphism(epi, &m)?;
    let x = load_input(m.chain(), input)?;
    let r = map_through(&phi, &m, &x).map_err(|e| e.to_string())?;
    let holds = r.holds();
    let text = format!(
        "φ(x) = {}\nφ(m) = {}\nSu_φ(m)(φ(x)) = {}\nφ(Su_m(x)) = {}\n{}\n",
        r.mapped_input,
        capacity_line(&r.pushed),
        r.pushed_value,
        r.mapped_value,
        if holds { "holds" } else { "fails" }
    );
    let payload = json!({
        "epimorphism": epi,
        "input": vector_strings(&r.input),
        "value": r.source_value.to_string(),
        "mapped_input": vector_strings(&r.mapped_input),
        "pushed_capacity": capacity_value(&r.pushed),
        "pushed_value": r.pushed_value.to_string(),
        "mapped_value": r.mapped_value.to_string(),
        "holds": holds,
    });
    Ok(Done::new(holds, payload, text))
}

fn cmd_verify(theorem: TheoremArg, chain_size: usize, arity: usize, max_grid: usize) -> Result<Done, String> {
    let chain = FiniteChain::numbered(chain_size).map_err(|e| format!("--chain-size: {e}"))?;
    match theorem {
        TheoremArg::Theorem1 => {
            let r = verify_theorem1(arity, &chain, max_grid).map_err(|e| e.to_string())?;
            let mut text = format!(
                "tables: {}\ncompatible: {}\nsugeno: {}\n",
                r.tables_total, r.compatible_count, r.sugeno_count
            );
            if let Some(c) = r.capacity_count {
                let _ = writeln!(text, "capacities: {c}");
            }
            let _ = writeln!(text, "sets equal: {}", yes_no(r.sets_equal));
            for w in &r.witnesses {
                let _ = writeln!(
                    text,
                    "witness: {:?} sugeno={} compatible={}",
                    w.entries, w.sugeno, w.compatible
                );
            }
            Ok(Done::new(r.holds(), to_value(&r), text))
        }
        TheoremArg::Theorem2 => {
            let r = verify_theorem2(arity, &chain, max_grid).map_err(|e| e.to_string())?;
            let mut text = format!(
                "epimorphisms: {}\nsugeno tables: {}\nforward checks: {} ({} failures)\n\
                 non-sugeno tables: {}\nrefuted by some epimorphism: {}\nholds: {}\n",
                r.epimorphisms,
                r.sugeno_tables,
                r.forward_checks,
                r.forward_failures,
                r.non_sugeno_tables,
                r.converse_refuted,
                yes_no(r.holds())
            );
            for w in &r.witnesses {
                let _ = writeln!(text, "witness: {:?} {}", w.table, w.detail);
            }
            Ok(Done::new(r.holds(), to_value(&r), text))
        }
        TheoremArg::Prop1 => {
            let r = verify_proposition1(&chain).map_err(|e| e.to_string())?;
            let text = format!(
                "equivalence relations: {}\ncongruences: {}\ninterval partitions: {}\n\
                 congruences are interval partitions: {}\nclosure and interval checks agree: {}\n",
                r.relations_total,
                r.congruences,
                r.interval_partitions,
                yes_no(r.congruences_are_interval_partitions),
                yes_no(r.routes_agree)
            );
            Ok(Done::new(r.holds(), to_value(&r), text))
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}
