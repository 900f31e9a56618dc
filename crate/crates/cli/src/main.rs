//! `qcorr`: compute correlation measures of quantum states stored as JSON files and
//! run the seeded verification suites.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use qcorr::activation::{classicality_separability_test, zero_way_equivalence};
use qcorr::io::{parse_state, StateInput};
use qcorr::koashi_winter::{kw_suite, KwReport};
use qcorr::random::random_density;
use qcorr::registry::{self, Inputs, Quantity};
use qcorr::{CorrelationReport, Error, OptimizerConfig, RandomSource, Side};

#[derive(Parser)]
#[command(name = "qcorr", version, about = "Entanglement and quantumness-of-correlations measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one quantity on a state file.
    #[command(after_help = quantity_help())]
    Compute(ComputeArgs),
    /// Check a state file against every state invariant.
    Validate(ValidateArgs),
    /// Koashi-Winter residuals on seeded random three-qubit pure states.
    VerifyKw(SuiteArgs),
    /// Deficit / activated distillability comparison and activation verdicts on
    /// seeded random two-qubit states.
    VerifyActivation(SuiteArgs),
    /// Compute one quantity on seeded random states.
    #[command(after_help = quantity_help())]
    RandomSuite(RandomSuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::A => Side::A,
            SideArg::B => Side::B,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args)]
struct OptimizerArgs {
    /// Number of random restarts of every optimization.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Master seed of all random choices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig::with_seed(self.seed).with_restarts(self.restarts)
    }
}

#[derive(Args)]
struct QuantityArgs {
    /// Quantity name (listed below).
    #[arg(long)]
    quantity: String,
    /// Measured or dephased subsystem for one-sided quantities.
    #[arg(long, value_enum, ignore_case = true, default_value = "B")]
    side: SideArg,
    /// Comma-separated subsystems on the left of the bipartition [default: 0].
    #[arg(long, value_delimiter = ',')]
    cut: Option<Vec<usize>>,
    /// Outcome count of rank-one POVMs (ensemble size for eof_ensemble_opt)
    /// [default: projective measurements].
    #[arg(long)]
    povm_outcomes: Option<usize>,
    #[command(flatten)]
    optimizer: OptimizerArgs,
}

#[derive(Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    /// State file (JSON).
    #[arg(long)]
    state: PathBuf,
    /// Second state for two-state quantities.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[command(flatten)]
    quantity: QuantityArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ValidateArgs {
    /// State file (JSON).
    #[arg(long)]
    state: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SuiteArgs {
    /// Number of random samples.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    /// Output format; csv writes one row per sample and the summary as JSON on
    /// stderr [default: csv for verify-kw, json for verify-activation].
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomSuiteArgs {
    /// Number of random samples.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Comma-separated subsystem dimensions of the random states.
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    dims: Vec<usize>,
    /// Rank of the random states [default: full rank].
    #[arg(long)]
    rank: Option<usize>,
    #[command(flatten)]
    quantity: QuantityArgs,
    #[command(flatten)]
    output: Output,
}

fn quantity_help() -> String {
    let mut s = String::from("Quantities:\n");
    for q in registry::quantities() {
        let reference = if q.needs_reference { " (needs --reference)" } else { "" };
        s.push_str(&format!("  {:<36} {}{}\n", q.name, q.summary, reference));
    }
    s
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::input(e.to_string())
        } else {
            Failure::internal(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn lookup(name: &str) -> CliResult<&'static Quantity> {
    registry::lookup(name).ok_or_else(|| {
        Failure::input(format!("unknown quantity {name:?}; known quantities: {}", registry::names().join(", ")))
    })
}

fn read_input(path: &Path) -> CliResult<(Vec<u8>, StateInput)> {
    let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::input(format!("{} is not UTF-8", path.display())))?;
    let state = parse_state(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((bytes, state))
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::internal(format!("cannot write output: {e}")))
        }
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::internal(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::internal(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn float(v: f64) -> String {
    format!("{v:?}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn joined(values: &[f64]) -> String {
    values.iter().map(|v| float(*v)).collect::<Vec<_>>().join(";")
}

const REPORT_HEADER: [&str; 8] = ["quantity", "value", "flag", "input_digest", "seed", "restarts", "parameters", "wall_time_seconds"];

fn report_row(r: &CorrelationReport) -> Vec<String> {
    vec![
        r.quantity.clone(),
        float(r.value),
        r.flag.map(|f| f.to_string()).unwrap_or_default(),
        r.input_digest.clone(),
        r.seed.to_string(),
        r.restarts.to_string(),
        joined(&r.parameters),
        float(r.wall_time_seconds),
    ]
}

fn plain_report(r: &CorrelationReport) -> String {
    let mut s = format!("{} = {}\n", r.quantity, r.value);
    if let Some(f) = r.flag {
        s.push_str(&format!("flag = {f}\n"));
    }
    if !r.parameters.is_empty() {
        s.push_str(&format!("parameters = {}\n", joined(&r.parameters)));
    }
    s.push_str(&format!("seed = {}\nrestarts = {}\ninput_digest = {}\n", r.seed, r.restarts, r.input_digest));
    s
}

fn build_inputs(state: StateInput, reference: Option<StateInput>, args: &QuantityArgs) -> Inputs {
    let mut inputs = Inputs::new(state);
    inputs.reference = reference;
    inputs.side = args.side.into();
    inputs.cut = args.cut.clone();
    inputs.povm_outcomes = args.povm_outcomes;
    inputs.config = args.optimizer.config();
    inputs
}

fn compute(args: ComputeArgs) -> CliResult<()> {
    let quantity = lookup(&args.quantity.quantity)?;
    if quantity.needs_reference && args.reference.is_none() {
        return Err(Failure::input(format!("{} needs --reference", quantity.name)));
    }
    let (bytes, state) = read_input(&args.state)?;
    let (ref_bytes, reference) = match &args.reference {
        Some(p) => {
            let (b, s) = read_input(p)?;
            (b, Some(s))
        }
        None => (Vec::new(), None),
    };
    let inputs = build_inputs(state, reference, &args.quantity);
    let start = Instant::now();
    let outcome = quantity.run(&inputs)?;
    let mut report = CorrelationReport::from_outcome(
        quantity.name,
        outcome,
        digest(&[&bytes, &ref_bytes]),
        inputs.config.seed,
        inputs.config.restarts,
    );
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    let text = match args.output.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => csv_text(&REPORT_HEADER, &[report_row(&report)])?,
        Format::Plain => plain_report(&report),
    };
    emit(args.output.out.as_deref(), &text)
}

fn validate(args: ValidateArgs) -> CliResult<()> {
    let (bytes, state) = read_input(&args.state)?;
    let rho = state.density();
    let eig = rho.eigenvalues();
    let kind = match state {
        StateInput::Mixed(_) => "mixed",
        StateInput::Pure(_) => "pure",
    };
    let summary = json!({
        "valid": true,
        "kind": kind,
        "dims": rho.dims(),
        "purity": rho.purity(),
        "rank": rho.rank(),
        "min_eigenvalue": eig.last().copied().unwrap_or(0.0),
        "input_digest": digest(&[&bytes]),
    });
    let text = match args.output.format {
        Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
        Format::Csv => csv_text(
            &["kind", "dims", "purity", "rank", "min_eigenvalue", "input_digest"],
            &[vec![
                kind.to_string(),
                rho.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";"),
                float(rho.purity()),
                rho.rank().to_string(),
                float(eig.last().copied().unwrap_or(0.0)),
                summary["input_digest"].as_str().unwrap_or_default().to_string(),
            ]],
        )?,
        Format::Plain => format!("valid {kind} state, dims {:?}, purity {}, rank {}\n", rho.dims(), rho.purity(), rho.rank()),
    };
    emit(args.output.out.as_deref(), &text)
}

const KW_HEADER: [&str; 16] = [
    "index",
    "seed",
    "j_ae",
    "s_a",
    "ef_ab",
    "d_ae",
    "cond_s_ae",
    "residual_kw",
    "residual_e4",
    "j_ab",
    "d_ab",
    "ef_ae",
    "cond_s_ab",
    "residual_conservation",
    "outcomes_ae",
    "amplitudes",
];

fn kw_row(index: usize, r: &KwReport, amplitudes: String) -> Vec<String> {
    vec![
        index.to_string(),
        r.seed.map(|s| s.to_string()).unwrap_or_default(),
        float(r.j_ae),
        float(r.s_a),
        float(r.ef_ab),
        float(r.d_ae),
        float(r.cond_s_ae),
        float(r.residual_kw),
        float(r.residual_e4),
        opt_float(r.j_ab),
        opt_float(r.d_ab),
        opt_float(r.ef_ae),
        opt_float(r.cond_s_ab),
        opt_float(r.residual_conservation),
        r.outcomes_ae.to_string(),
        amplitudes,
    ]
}

fn suite_output(args: &SuiteArgs, default: Format, header: &[&str], rows: Vec<Vec<String>>, records: serde_json::Value, summary: serde_json::Value) -> CliResult<()> {
    let text = match args.format.unwrap_or(default) {
        Format::Csv => {
            eprintln!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            csv_text(header, &rows)?
        }
        Format::Json => serde_json::to_string_pretty(&json!({ "summary": summary, "samples": records })).expect("report serializes") + "\n",
        Format::Plain => {
            let mut s = String::new();
            if let Some(obj) = summary.as_object() {
                for (k, v) in obj {
                    s.push_str(&format!("{k} = {v}\n"));
                }
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)
}

fn verify_kw(args: SuiteArgs) -> CliResult<()> {
    let config = args.optimizer.config();
    let suite = kw_suite(args.samples, config.seed, &config)?;
    let amplitudes: Vec<String> = (0..args.samples)
        .map(|i| {
            let psi = qcorr::koashi_winter::sample_state(config.seed, i);
            psi.amps().iter().map(|z| format!("{:?}{:+?}i", z.re, z.im)).collect::<Vec<_>>().join(";")
        })
        .collect();
    let rows = suite.reports.iter().enumerate().map(|(i, r)| kw_row(i, r, amplitudes[i].clone())).collect();
    let mut summary = serde_json::to_value(&suite.summary).expect("summary serializes");
    summary["restarts"] = json!(config.restarts);
    suite_output(&args, Format::Csv, &KW_HEADER, rows, serde_json::to_value(&suite.reports).expect("reports serialize"), summary)
}

/// Random two-qubit state of sample `index`; ranks cycle through 1..=4.
fn activation_sample(seed: u64, index: usize) -> (u64, qcorr::DensityMatrix) {
    let s = RandomSource::child_seed(seed, index as u64);
    let rho = random_density(&[2, 2], 1 + index % 4, &mut RandomSource::new(s)).expect("rank within dimension");
    (s, rho)
}

fn verify_activation(args: SuiteArgs) -> CliResult<()> {
    let config = args.optimizer.config();
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut counts = std::collections::BTreeMap::<String, usize>::new();
    for i in 0..args.samples {
        let (s, rho) = activation_sample(config.seed, i);
        let cfg = OptimizerConfig { seed: s, ..config.clone() };
        let eq = zero_way_equivalence(&rho, &cfg)?;
        let test = classicality_separability_test(&rho, &cfg)?;
        let verdict = serde_json::to_value(test.verdict).expect("verdict serializes");
        let verdict = verdict.as_str().unwrap_or_default().to_string();
        max_residual = max_residual.max(eq.residual);
        *counts.entry(verdict.clone()).or_default() += 1;
        rows.push(vec![
            i.to_string(),
            s.to_string(),
            float(eq.zero_way_deficit),
            float(eq.min_distillable),
            float(eq.residual),
            float(test.min_negativity),
            verdict.clone(),
            test.consistent.to_string(),
        ]);
        records.push(json!({
            "index": i,
            "seed": s,
            "zero_way_deficit": eq.zero_way_deficit,
            "min_distillable": eq.min_distillable,
            "residual": eq.residual,
            "min_negativity": test.min_negativity,
            "verdict": verdict,
            "consistent": test.consistent,
        }));
    }
    let summary = json!({
        "samples": args.samples,
        "seed": config.seed,
        "restarts": config.restarts,
        "max_residual": max_residual,
        "verdicts": counts,
    });
    let header = ["index", "seed", "zero_way_deficit", "min_distillable", "residual", "min_negativity", "verdict", "consistent"];
    suite_output(&args, Format::Json, &header, rows, json!(records), summary)
}

fn random_suite(args: RandomSuiteArgs) -> CliResult<()> {
    let quantity = lookup(&args.quantity.quantity)?;
    if quantity.needs_reference {
        return Err(Failure::input(format!("{} needs a reference state and cannot run on random samples", quantity.name)));
    }
    if args.dims.is_empty() || args.dims.iter().any(|&d| d < 2) {
        return Err(Failure::input("--dims needs subsystem dimensions of at least 2"));
    }
    let n: usize = args.dims.iter().product();
    let rank = args.rank.unwrap_or(n);
    if rank == 0 || rank > n {
        return Err(Failure::input(format!("--rank must lie in 1..={n}")));
    }
    let base = args.quantity.optimizer.config();
    let mut reports = Vec::new();
    for i in 0..args.samples {
        let s = RandomSource::child_seed(base.seed, i as u64);
        let rho = random_density(&args.dims, rank, &mut RandomSource::new(s))?;
        let state_json = qcorr::io::density_to_json(&rho);
        let mut inputs = build_inputs(StateInput::Mixed(rho), None, &args.quantity);
        inputs.config.seed = s;
        let start = Instant::now();
        let outcome = quantity.run(&inputs)?;
        let mut r = CorrelationReport::from_outcome(quantity.name, outcome, digest(&[state_json.as_bytes()]), s, base.restarts);
        r.wall_time_seconds = start.elapsed().as_secs_f64();
        reports.push(r);
    }
    let text = match args.output.format {
        Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
        Format::Csv => csv_text(&REPORT_HEADER, &reports.iter().map(report_row).collect::<Vec<_>>())?,
        Format::Plain => reports.iter().map(|r| format!("{} {}\n", r.seed, r.value)).collect(),
    };
    emit(args.output.out.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Validate(a) => validate(a),
        Command::VerifyKw(a) => verify_kw(a),
        Command::VerifyActivation(a) => verify_activation(a),
        Command::RandomSuite(a) => random_suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
