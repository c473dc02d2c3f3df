// Copyright 2026 The qcsi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end.
//!
//! Every command writes newline-delimited JSON records to stdout. The last
//! record of a successful run carries the run configuration. Failures emit a
//! single `{"record": "error", ...}` line, a message on stderr and a nonzero
//! exit status (2 for usage errors, 1 otherwise). `--table` appends a
//! human-readable table after the records.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hvm::{exact_outcome_chain, parse_circuit, simulate_circuit_hvm, HiddenVariableModel, HvmPrior};
use crate::mbqc::{red_site_equivalence, verify_logical_gate, CellFixture, RedSiteReport};
use crate::oracle::{ghz_state, DenseState};
use crate::pauli::PauliObservable;
use crate::scheme::{analyze, parse_scheme, SchemeSpec};
use crate::witness::ghz_report;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "QCSI_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "qcsi-lab",
    version,
    about = "Hidden-variable simulation and contextuality analysis for state-injection schemes"
)]
pub struct Cli {
    /// Append a human-readable table after the JSON records.
    #[arg(long, global = true)]
    pub table: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measurement-scheme analysis.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Hidden-variable model runs.
    #[command(subcommand)]
    Hvm(HvmCmd),
    /// Dense reference simulator.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Contextuality witness.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Cluster-state wire demonstration.
    #[command(subcommand)]
    Mbqc(MbqcCmd),
}

#[derive(Subcommand, Debug)]
pub enum SchemeCmd {
    /// Closure, consistency (c1) and tomographic completeness (c2).
    Check {
        #[arg(long)]
        scheme: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct HvmInputs {
    #[arg(long)]
    pub scheme: PathBuf,
    #[arg(long)]
    pub circuit: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum HvmCmd {
    /// Exact probabilities of one outcome string, starting from I/2^n.
    Exact {
        #[command(flatten)]
        inputs: HvmInputs,
        /// Outcomes as a string over `+`/`-`, one per measurement.
        #[arg(long, allow_hyphen_values = true)]
        outcomes: String,
    },
    /// Trajectory sampling, starting from I/2^n.
    Sample {
        #[command(flatten)]
        inputs: HvmInputs,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Result file; `.csv` writes per-step marginals, anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ghz,
    Zeros,
    Mixed,
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// Expectation of a Pauli observable.
    Expect {
        #[arg(long, value_enum)]
        state: StateKind,
        #[arg(long, allow_hyphen_values = true)]
        observable: String,
        /// Write amplitudes (or the density matrix) as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// Mermin witness on the GHZ state, optionally mixed with I/8.
    Ghz {
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum MbqcCmd {
    /// Verifies a shipped (or custom) cell over random inputs.
    Demo {
        /// Shipped cell: a, b or two-red.
        #[arg(long, default_value = "a")]
        cell: String,
        /// Custom cell fixture (JSON); overrides --cell.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Configuration echoed in every report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, Value>,
}

struct Report {
    records: Vec<Value>,
    table: Option<String>,
}

fn record<T: Serialize>(kind: &str, body: &T) -> Result<Value> {
    let mut v = serde_json::to_value(body)?;
    match &mut v {
        Value::Object(map) => {
            let mut out = serde_json::Map::new();
            out.insert("record".into(), json!(kind));
            out.append(map);
            Ok(Value::Object(out))
        }
        other => Ok(json!({ "record": kind, "value": other })),
    }
}

fn with_config(mut v: Value, config: &RunConfig) -> Result<Value> {
    if let Value::Object(map) = &mut v {
        map.insert("config".into(), serde_json::to_value(config)?);
    }
    Ok(v)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn load_scheme(path: &Path) -> Result<SchemeSpec> {
    parse_scheme(&read(path)?).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn parse_outcomes(text: &str) -> Result<Vec<i8>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' | '1' => Ok(1),
            '-' | '\u{2212}' | '0' => Ok(-1),
            other => Err(Error::Usage(format!("outcome {other:?} is not + or -"))),
        })
        .collect()
}

fn scheme_check(path: &Path) -> Result<Report> {
    let spec = load_scheme(path)?;
    let report = analyze(&spec)?;
    let config = RunConfig {
        subcommand: "scheme check".into(),
        scheme: Some(path_string(path)),
        ..Default::default()
    };
    let table = format!(
        "n                 {}\nc1 (no SIC)       {}\nc2 (complete)     {}\ninferable         {}\ncontexts          {}\ncertificate       {}\n",
        report.n,
        report.c1,
        report.c2,
        report.inferable_count,
        report.context_count,
        report
            .certificate
            .as_ref()
            .map_or("none".to_string(), |c| format!("{} equations", c.equations.len())),
    );
    Ok(Report {
        records: vec![with_config(record("scheme_check", &report)?, &config)?],
        table: Some(table),
    })
}

fn hvm_setup(inputs: &HvmInputs) -> Result<(HiddenVariableModel, crate::hvm::Circuit)> {
    let spec = load_scheme(&inputs.scheme)?;
    let model = HiddenVariableModel::for_scheme(&spec)?;
    let circuit = parse_circuit(&read(&inputs.circuit)?, spec.num_qubits())?;
    Ok((model, circuit))
}

fn hvm_exact(inputs: &HvmInputs, outcomes: &str) -> Result<Report> {
    let (model, circuit) = hvm_setup(inputs)?;
    let outcomes = parse_outcomes(outcomes)?;
    let (records, _) = exact_outcome_chain(&model, &HvmPrior::MaximallyMixed, &circuit, &outcomes)?;
    let joint: f64 = records.iter().map(|r| r.model_p).product();
    let mut out = Vec::new();
    let mut table = String::from("step  label       outcome  model_p\n");
    for r in &records {
        out.push(record("hvm_step", r)?);
        table.push_str(&format!(
            "{:<4}  {:<10}  {:>+7}  {:.12}\n",
            r.step, r.label, r.outcome, r.model_p
        ));
    }
    table.push_str(&format!("joint probability {joint:.12}\n"));
    let config = RunConfig {
        subcommand: "hvm exact".into(),
        scheme: Some(path_string(&inputs.scheme)),
        circuit: Some(path_string(&inputs.circuit)),
        extra: [(
            "outcomes".to_string(),
            json!(outcomes
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect::<String>()),
        )]
        .into_iter()
        .collect(),
        ..Default::default()
    };
    out.push(with_config(
        json!({ "record": "hvm_exact", "measurements": records.len(), "joint_probability": joint }),
        &config,
    )?);
    Ok(Report {
        records: out,
        table: Some(table),
    })
}

fn hvm_sample(inputs: &HvmInputs, shots: u64, seed: u64, out_path: Option<&Path>) -> Result<Report> {
    let (model, circuit) = hvm_setup(inputs)?;
    let summary = simulate_circuit_hvm(&model, &HvmPrior::MaximallyMixed, &circuit, shots, seed)?;
    let format = out_path.map(|p| {
        if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            "csv"
        } else {
            "json"
        }
    });
    let config = RunConfig {
        subcommand: "hvm sample".into(),
        scheme: Some(path_string(&inputs.scheme)),
        circuit: Some(path_string(&inputs.circuit)),
        shots: Some(shots),
        seed: Some(seed),
        out: out_path.map(path_string),
        format: format.map(str::to_string),
        ..Default::default()
    };
    let marginals = summary.marginal_records();

    if let Some(path) = out_path {
        let body = if format == Some("csv") {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &marginals {
                w.serialize(r).map_err(std::io::Error::other)?;
            }
            let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is UTF-8")
        } else {
            let doc = json!({
                "config": config,
                "records": marginals,
                "steps": summary.steps,
                "histogram": summary.histogram,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        };
        fs::write(path, body)?;
    }

    let mut records = Vec::new();
    for r in &marginals {
        records.push(record("hvm_marginal", r)?);
    }
    for (outcomes, count) in &summary.histogram {
        records.push(json!({
            "record": "hvm_histogram",
            "outcomes": outcomes,
            "count": count,
            "frequency": *count as f64 / shots as f64,
        }));
    }
    records.push(with_config(
        json!({ "record": "hvm_sample", "shots": shots, "steps": summary.steps }),
        &config,
    )?);
    let mut table = String::from("step  label       mean\n");
    for s in &summary.steps {
        table.push_str(&format!("{:<4}  {:<10}  {:+.6}\n", s.step, s.label, s.mean));
    }
    Ok(Report {
        records,
        table: Some(table),
    })
}

fn oracle_expect(state: StateKind, observable: &str, dump: Option<&Path>) -> Result<Report> {
    let op: PauliObservable = observable.parse()?;
    let n = op.num_qubits();
    let rho = match state {
        StateKind::Ghz => {
            if n != 3 {
                return Err(Error::Dimension { expected: 3, found: n });
            }
            ghz_state()
        }
        StateKind::Zeros => DenseState::zeros(n)?,
        StateKind::Mixed => DenseState::maximally_mixed(n)?,
    };
    let value = rho.pauli_expectation(&op)?;
    if let Some(path) = dump {
        fs::write(path, serde_json::to_string_pretty(&rho.dump())? + "\n")?;
    }
    let mut extra = serde_json::Map::new();
    extra.insert("state".into(), json!(state));
    extra.insert("observable".into(), json!(observable));
    if let Some(p) = dump {
        extra.insert("dump".into(), json!(path_string(p)));
    }
    let config = RunConfig {
        subcommand: "oracle expect".into(),
        extra,
        ..Default::default()
    };
    Ok(Report {
        records: vec![with_config(
            json!({ "record": "oracle_expect", "observable": op.to_string(), "expectation": value }),
            &config,
        )?],
        table: Some(format!("<{op}> = {value:+.12}\n")),
    })
}

fn witness(noise: f64) -> Result<Report> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::Usage(format!("noise {noise} outside [0, 1]")));
    }
    let r = ghz_report(noise)?;
    let config = RunConfig {
        subcommand: "witness ghz".into(),
        noise: Some(noise),
        ..Default::default()
    };
    let v = json!({
        "record": "witness",
        "quantum": r.quantum_value,
        "hvm_bound": r.hvm_max,
        "gap": r.gap,
        "terms": r.terms,
        "hvm_assignment": r.hvm_assignment,
        "hvm_optimal_count": r.hvm_optimal_count,
    });
    Ok(Report {
        records: vec![with_config(v, &config)?],
        table: Some(r.table()),
    })
}

fn mbqc_demo(cell: &str, fixture: Option<&Path>, trials: usize, seed: u64) -> Result<Report> {
    let cell = match fixture {
        Some(p) => CellFixture::from_json(&read(p)?)?,
        None => CellFixture::builtin(cell)?,
    };
    let pattern = cell.pattern()?;
    let reference = cell.reference()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verify = verify_logical_gate(&cell.graph, &pattern, &reference, trials, &mut rng)?;

    // Red-site identity on every branch, for a fresh set of random inputs.
    let mut red = RedSiteReport {
        branches: 0,
        red_measurements: 0,
        max_probability_deviation: 0.0,
        max_output_deviation: 0.0,
    };
    if !cell.graph.red_sites.is_empty() && pattern.num_steps() <= crate::mbqc::MAX_ENUMERATED_STEPS {
        for _ in 0..trials {
            let psi = crate::mbqc::random_qubit(&mut rng);
            let r = red_site_equivalence(&cell.graph, &pattern, &DenseState::pure(1, psi.to_vec())?)?;
            red.branches += r.branches;
            red.red_measurements += r.red_measurements;
            red.max_probability_deviation = red.max_probability_deviation.max(r.max_probability_deviation);
            red.max_output_deviation = red.max_output_deviation.max(r.max_output_deviation);
        }
    }

    let mut extra = serde_json::Map::new();
    extra.insert("cell".into(), json!(cell.name));
    extra.insert("trials".into(), json!(trials));
    if let Some(p) = fixture {
        extra.insert("fixture".into(), json!(path_string(p)));
    }
    let config = RunConfig {
        subcommand: "mbqc demo".into(),
        seed: Some(seed),
        extra,
        ..Default::default()
    };
    let table = format!(
        "cell              {}\nexpected gate     {}\nsteps             {}\nbranches checked  {}\nmin fidelity      {:.15}\nred-site max |dp| {:.3e}\n",
        cell.name,
        if cell.expected.is_empty() { "I".to_string() } else { cell.expected.join(" ") },
        pattern.num_steps(),
        verify.branches,
        verify.min_fidelity,
        red.max_probability_deviation
    );
    let v = json!({
        "record": "mbqc_demo",
        "cell": cell.name,
        "description": cell.description,
        "expected": cell.expected,
        "pattern": pattern,
        "verify": verify,
        "red_site": red,
    });
    Ok(Report {
        records: vec![with_config(v, &config)?],
        table: Some(table),
    })
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Scheme(SchemeCmd::Check { scheme }) => scheme_check(scheme),
        Command::Hvm(HvmCmd::Exact { inputs, outcomes }) => hvm_exact(inputs, outcomes),
        Command::Hvm(HvmCmd::Sample {
            inputs,
            shots,
            seed,
            out,
        }) => hvm_sample(inputs, *shots, *seed, out.as_deref()),
        Command::Oracle(OracleCmd::Expect {
            state,
            observable,
            dump,
        }) => oracle_expect(*state, observable, dump.as_deref()),
        Command::Witness(WitnessCmd::Ghz { noise }) => witness(*noise),
        Command::Mbqc(MbqcCmd::Demo {
            cell,
            fixture,
            trials,
            seed,
        }) => mbqc_demo(cell, fixture.as_deref(), *trials, *seed),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Usage(e.to_string()))
}

fn emit_error(out: &mut dyn Write, err: &mut dyn Write, kind: &str, message: &str) {
    let rec = json!({ "record": "error", "kind": kind, "message": message });
    let _ = writeln!(out, "{rec}");
    let _ = writeln!(err, "error: {message}");
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let message = e.render().to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            emit_error(out, err, "usage", &first);
            let _ = write!(err, "{message}");
            return 2;
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| dispatch(&cli)));
    match result {
        Ok(report) => {
            for r in &report.records {
                if writeln!(out, "{r}").is_err() {
                    return 1;
                }
            }
            if cli.table {
                if let Some(t) = &report.table {
                    let _ = write!(out, "{t}");
                }
            }
            0
        }
        Err(e) => {
            emit_error(out, err, e.kind(), &e.to_string());
            if matches!(e, Error::Usage(_)) {
                2
            } else {
                1
            }
        }
    }
}
