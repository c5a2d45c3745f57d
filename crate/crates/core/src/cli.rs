//! Command-line front end. `run` never touches the process: it returns the
//! exit code and both output streams, which keeps golden tests in-process.
//!
//! Exit codes: 0 success, 1 negative verdict (`iso` found no isomorphism),
//! 2 usage or validation error. Errors are reported as JSON on stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::decomposition::{
    barcode_interval, composition_factors, fourier_decompose, generic_decompose, DEFAULT_MAX_ROUNDS,
};
use crate::error::{Error, Result};
use crate::io::{self, Workspace};
use crate::linalg::RankTolerance;
use crate::morphisms::{end_dim, is_isomorphic, DEFAULT_TRIALS};
use crate::quiver::Path;

#[derive(Debug, Parser)]
#[command(name = "quiver-signal", version, about = "Signal processing on quiver representations")]
struct Cli {
    #[command(flatten)]
    inputs: Inputs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Inputs {
    /// Quiver JSON file
    #[arg(short = 'q', long, global = true)]
    quiver: Option<PathBuf>,
    /// Representation JSON file (given twice for `iso`)
    #[arg(short = 'r', long = "rep", global = true)]
    reps: Vec<PathBuf>,
    /// Signal JSON file
    #[arg(short = 'x', long, global = true)]
    signal: Option<PathBuf>,
    /// Filter JSON file
    #[arg(short = 'f', long, global = true)]
    filter: Option<PathBuf>,
    /// Filtered complex JSON file
    #[arg(short = 'c', long, global = true)]
    complex: Option<PathBuf>,
    /// Seed for randomized operations
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Absolute rank tolerance overriding the default relative one
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load every given file and check cross-references
    Validate,
    /// Apply a filter to a signal
    Filter,
    /// Materialize the shift operator of one path
    Shift {
        /// Comma-separated arrow ids in application order
        #[arg(long, conflicts_with = "base", required_unless_present = "base")]
        path: Option<String>,
        /// Node of a trivial path
        #[arg(long)]
        base: Option<String>,
    },
    /// List all paths up to a length
    Paths {
        #[arg(long)]
        max_len: usize,
    },
    /// Randomized isomorphism test between two representations
    Iso {
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Decompose a representation
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
        max_rounds: usize,
    },
    /// Persistence barcode of a filtered complex
    Tda {
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Barcode,
    Generic,
    Fourier,
    Factors,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Barcode => "barcode",
            Mode::Generic => "generic",
            Mode::Fourier => "fourier",
            Mode::Factors => "factors",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(kind: &str, message: String) -> Self {
        let doc = json!({"error": {"kind": kind, "message": message}});
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: io::to_canonical(&doc).unwrap_or_else(|_| format!("{doc}\n")),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(e.render().to_string(), 0),
                _ => Outcome::failure("usage", e.render().to_string().trim_end().to_string()),
            };
        }
    };
    match execute(cli) {
        Ok((doc, code)) => match io::to_canonical(&doc) {
            Ok(text) => Outcome::ok(text, code),
            Err(e) => Outcome::failure(kind(&e), e.to_string()),
        },
        Err(e) => Outcome::failure(kind(&e), e.to_string()),
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::DuplicateNode(_)
        | Error::DuplicateArrow(_)
        | Error::UnknownEndpoint { .. }
        | Error::UnknownNode(_)
        | Error::UnknownArrow(_)
        | Error::NotComposable { .. } => "quiver",
        Error::QuiverMismatch | Error::MissingMap(_) | Error::ShapeMismatch { .. } | Error::BlockLength { .. } => {
            "validation"
        }
        Error::NotChain(_) | Error::Cyclic | Error::NotSemisimple { .. } => "precondition",
        Error::InvalidSimplex { .. } => "complex",
        Error::Invalid(_) => "invalid",
    }
}

fn usage(msg: &str) -> Error {
    Error::Invalid(msg.to_string())
}

fn tolerance(tol: Option<f64>) -> Result<RankTolerance> {
    match tol {
        None => Ok(RankTolerance::Default),
        Some(t) if t.is_finite() && t >= 0.0 => Ok(RankTolerance::Absolute(t)),
        Some(t) => Err(usage(&format!("--tol must be a finite non-negative number, got {t}"))),
    }
}

fn load(inputs: &Inputs) -> Result<Workspace> {
    let mut ws = Workspace::with_seed(inputs.seed);
    if let Some(q) = &inputs.quiver {
        ws.load_quiver(q)?;
    }
    for r in &inputs.reps {
        ws.load_representation(r)?;
    }
    if let Some(x) = &inputs.signal {
        ws.load_signal(x)?;
    }
    if let Some(f) = &inputs.filter {
        ws.load_filter(f)?;
    }
    if let Some(c) = &inputs.complex {
        ws.load_complex(c)?;
    }
    Ok(ws)
}

fn with_mode(mode: Mode, mut doc: Value) -> Value {
    if let Value::Object(map) = &mut doc {
        map.insert("mode".into(), Value::String(mode.name().into()));
    }
    doc
}

fn execute(cli: Cli) -> Result<(Value, i32)> {
    let tol = tolerance(cli.inputs.tol)?;
    let ws = load(&cli.inputs)?;
    match cli.command {
        Command::Validate => Ok((validate_report(&ws), 0)),
        Command::Filter => {
            let rep = ws.representation()?;
            let c = ws.filters.first().ok_or_else(|| usage("a filter file is required (-f)"))?;
            let x = ws.signals.first().ok_or_else(|| usage("a signal file is required (-x)"))?;
            let y = rep.apply_filter(c, x)?;
            Ok((serde_json::to_value(io::signal_to_file(rep, &y)).expect("plain data"), 0))
        }
        Command::Shift { path, base } => {
            let rep = ws.representation()?;
            let q = rep.quiver();
            let ids: Vec<String> = path
                .map(|p| p.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
                .unwrap_or_default();
            let p = io::path_from_term(q, &ids, base.as_deref())?;
            let shift = rep.shift_operator(&p)?;
            let (row, col) = shift.support();
            Ok((
                json!({
                    "path": io::path_value(q, &p),
                    "matrix": io::matrix_to_file(&shift.matrix),
                    "block": {"row": q.nodes()[row], "col": q.nodes()[col]},
                }),
                0,
            ))
        }
        Command::Paths { max_len } => {
            let q = ws.quiver()?;
            let paths: Vec<Path> = q.enumerate_paths(max_len);
            let listed: Vec<Value> = paths.iter().map(|p| io::path_value(q, p)).collect();
            Ok((json!({"max_len": max_len, "count": listed.len(), "paths": listed}), 0))
        }
        Command::Iso { trials } => {
            let seed = ws.seed.ok_or_else(|| usage("iso is randomized and requires --seed"))?;
            let [a, b] = ws.representations.as_slice() else {
                return Err(usage("iso needs exactly two representation files (-r A -r B)"));
            };
            let verdict = is_isomorphic(a, b, trials, seed, tol)?;
            let witness = verdict.witness.as_ref().map(|w| {
                a.quiver()
                    .nodes()
                    .iter()
                    .cloned()
                    .zip(w.blocks.iter().map(io::matrix_to_file))
                    .collect::<BTreeMap<_, _>>()
            });
            let code = if verdict.isomorphic { 0 } else { 1 };
            Ok((json!({"isomorphic": verdict.isomorphic, "witness": witness}), code))
        }
        Command::Decompose { mode, max_rounds } => {
            let rep = ws.representation()?;
            let doc = match mode {
                Mode::Barcode => io::barcode_value(&barcode_interval(rep, tol)?),
                Mode::Generic => {
                    let seed = ws.seed.ok_or_else(|| usage("generic decomposition is randomized and requires --seed"))?;
                    let list = generic_decompose(rep, seed, max_rounds, tol);
                    let ends: Vec<usize> = list.summands.iter().map(|s| end_dim(&s.rep, tol)).collect();
                    let mut doc = io::summands_value(&list, &ends);
                    let unsplit = list.summands.iter().filter(|s| s.unsplit).count();
                    doc["unsplit_count"] = json!(unsplit);
                    doc
                }
                Mode::Fourier => {
                    let x = ws.signals.first().ok_or_else(|| usage("fourier mode needs a signal file (-x)"))?;
                    io::fourier_value(rep.quiver(), &fourier_decompose(rep, x)?)
                }
                Mode::Factors => {
                    let factors = composition_factors(rep)?;
                    let named: BTreeMap<&str, usize> =
                        rep.quiver().nodes().iter().map(String::as_str).zip(factors).collect();
                    json!({ "factors": named })
                }
            };
            Ok((with_mode(mode, doc), 0))
        }
        Command::Tda { degree } => {
            let cx = ws.complexes.first().ok_or_else(|| usage("tda needs a complex file (-c)"))?;
            let bc = cx.persistence_barcode(degree)?;
            let betti: Vec<usize> = (0..=cx.steps()).map(|l| cx.betti(degree, l)).collect();
            let mut doc = io::barcode_value(&bc);
            doc["degree"] = json!(degree);
            doc["betti"] = json!(betti);
            Ok((doc, 0))
        }
    }
}

fn validate_report(ws: &Workspace) -> Value {
    let mut doc = serde_json::Map::new();
    doc.insert("valid".into(), json!(true));
    if let Some(q) = &ws.quiver {
        doc.insert(
            "quiver".into(),
            json!({"nodes": q.node_count(), "arrows": q.arrow_count(), "acyclic": q.is_acyclic()}),
        );
    }
    let reps: Vec<Value> = ws
        .representations
        .iter()
        .map(|r| json!({"total_dim": r.total_dim(), "dims": io::representation_to_file(r).dims}))
        .collect();
    doc.insert("representations".into(), json!(reps));
    doc.insert("signals".into(), json!(ws.signals.len()));
    let filters: Vec<usize> = ws.filters.iter().map(|f| f.len()).collect();
    doc.insert("filter_terms".into(), json!(filters));
    let complexes: Vec<Value> = ws
        .complexes
        .iter()
        .map(|c| json!({"simplices": c.simplices().len(), "n": c.steps()}))
        .collect();
    doc.insert("complexes".into(), json!(complexes));
    Value::Object(doc)
}
