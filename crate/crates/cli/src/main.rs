//! `deabench` command-line front end.
//!
//! Exit codes: 0 success, 1 malformed or invalid input data, 2 solver
//! failure, 3 bad flags or invalid generator spec.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;

use deabench_core::domain::{check_discrimination, Cohort, ModelSpec, ReturnsToScale};
use deabench_core::io::{parse_gen_config, read_cohort_file, write_cohort};
use deabench_core::report::{ReportBundle, RunInfo};
use deabench_core::scope::{analyze_global, analyze_local, compare_scopes, ExcessMode};
use deabench_core::synth::{generate, GenSpec};

const EXIT_DATA: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "deabench", version, about = "Input-oriented DEA with local-versus-global benchmarking")]
struct Cli {
    /// Log solver tableaus at trace level.
    #[arg(long, global = true)]
    verbose: bool,
    /// Worker threads for the solves (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every DMU within one scope.
    Analyze(AnalyzeArgs),
    /// Score every DMU within its group and in the pooled cohort, and compare.
    Compare(CompareArgs),
    /// Write a synthetic cohort CSV.
    Generate(GenerateArgs),
    /// Check a cohort CSV and print its shape.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Cohort CSV (`dmu_id,group,x1..xN,y1..yM`).
    #[arg(long, required_unless_present = "paper_default", conflicts_with = "paper_default")]
    input: Option<PathBuf>,
    /// Use the built-in nine-group synthetic cohort instead of a file.
    #[arg(long)]
    paper_default: bool,
    /// Seed for --paper-default.
    #[arg(long, requires = "paper_default")]
    seed: Option<u64>,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    rts: Option<RtsArg>,
    /// Model name; `ccr` implies --rts crs and `bcc` implies --rts vrs.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum, default_value = "all")]
    excess_mode: ExcessArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Report destination (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "group")]
    scope: ScopeArg,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator config file (flat `key = value`).
    #[arg(long, required_unless_present = "paper_default", conflicts_with = "paper_default")]
    config: Option<PathBuf>,
    #[arg(long)]
    paper_default: bool,
    /// Overrides the config seed; defaults to 0 with --paper-default.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum RtsArg {
    Crs,
    Vrs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ccr,
    Bcc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Group,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExcessArg {
    All,
    InefficientOnly,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    env_logger::Builder::new()
        .filter_level(if cli.verbose { LevelFilter::Trace } else { LevelFilter::Warn })
        .format_timestamp(None)
        .init();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let verbose = cli.verbose;
    let outcome = pool.install(|| match cli.command {
        Command::Analyze(args) => cmd_analyze(args, verbose),
        Command::Compare(args) => cmd_compare(args, verbose),
        Command::Generate(args) => cmd_generate(args),
        Command::Validate(args) => cmd_validate(args),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn model_spec(args: &ModelArgs, verbose: bool) -> Result<ModelSpec, Failure> {
    let from_model = args.model.map(|m| match m {
        ModelArg::Ccr => ReturnsToScale::Crs,
        ModelArg::Bcc => ReturnsToScale::Vrs,
    });
    let from_rts = args.rts.map(|r| match r {
        RtsArg::Crs => ReturnsToScale::Crs,
        RtsArg::Vrs => ReturnsToScale::Vrs,
    });
    let rts = match (from_model, from_rts) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("--model implies rts {a} but --rts is {b}"),
            ))
        }
        (a, b) => a.or(b).unwrap_or(ReturnsToScale::Crs),
    };
    let mut spec = ModelSpec::new(rts);
    spec.solver.trace_tableau = verbose;
    Ok(spec)
}

fn excess_mode(arg: ExcessArg) -> ExcessMode {
    match arg {
        ExcessArg::All => ExcessMode::All,
        ExcessArg::InefficientOnly => ExcessMode::InefficientOnly,
    }
}

/// Loads the cohort and describes where it came from.
fn load(source: &SourceArgs) -> Result<(Cohort, String, Option<u64>), Failure> {
    if source.paper_default {
        let seed = source.seed.unwrap_or(0);
        let cohort = generate(&GenSpec::paper_default(seed)).map_err(|e| Failure::new(EXIT_USAGE, e))?;
        return Ok((cohort, "paper-default".into(), Some(seed)));
    }
    let path = source.input.as_ref().expect("clap enforces --input");
    let cohort = read_cohort_file(path)
        .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    Ok((cohort, path.display().to_string(), None))
}

fn emit(output: Option<&Path>, contents: &str) -> CmdResult {
    match output {
        Some(path) => fs::write(path, contents)
            .map_err(|e| Failure::new(EXIT_DATA, format!("cannot write {}: {e}", path.display()))),
        None => match std::io::stdout().write_all(contents.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Failure::new(EXIT_DATA, format!("cannot write to stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn render(report: &ReportBundle, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

fn warn_discrimination(cohort: &Cohort, per_group: bool) {
    for check in check_discrimination(cohort, per_group) {
        if !check.pass {
            log::warn!(
                "scope '{}' has {} DMUs, below the discrimination threshold {}",
                check.scope,
                check.size,
                check.threshold
            );
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs, verbose: bool) -> CmdResult {
    let spec = model_spec(&args.model, verbose)?;
    let (cohort, source, seed) = load(&args.source)?;
    let mode = excess_mode(args.model.excess_mode);
    let info = RunInfo {
        command: "analyze".into(),
        source,
        seed,
        spec: spec.clone(),
        excess_mode: mode,
    };
    let solver_failure = |e| Failure::new(EXIT_SOLVER, e);
    let report = match args.scope {
        ScopeArg::Group => {
            warn_discrimination(&cohort, true);
            let local = analyze_local(&cohort, &spec, mode).map_err(solver_failure)?;
            ReportBundle::single_scope(&cohort, &info, Some(&local), None)
        }
        ScopeArg::Global => {
            warn_discrimination(&cohort, false);
            let global = analyze_global(&cohort, &spec, mode).map_err(solver_failure)?;
            ReportBundle::single_scope(&cohort, &info, None, Some(&global))
        }
    };
    emit(args.model.output.as_deref(), &render(&report, args.model.format))
}

fn cmd_compare(args: CompareArgs, verbose: bool) -> CmdResult {
    let spec = model_spec(&args.model, verbose)?;
    let (cohort, source, seed) = load(&args.source)?;
    if cohort.groups().len() < 2 {
        log::warn!("cohort has a single group; local and global scopes coincide");
    }
    warn_discrimination(&cohort, true);
    let mode = excess_mode(args.model.excess_mode);
    let run = compare_scopes(&cohort, &spec, mode).map_err(|e| Failure::new(EXIT_SOLVER, e))?;
    let info = RunInfo {
        command: "compare".into(),
        source,
        seed,
        spec,
        excess_mode: mode,
    };
    let report = ReportBundle::comparison(&cohort, &info, &run);
    emit(args.model.output.as_deref(), &render(&report, args.model.format))
}

fn discrimination_table(cohort: &Cohort) -> String {
    let mut out = format!(
        "K={} N={} M={} groups={}\n{:<12} {:>6} {:>9}  result\n",
        cohort.len(),
        cohort.n_inputs(),
        cohort.n_outputs(),
        cohort.groups().len(),
        "group",
        "size",
        "threshold"
    );
    for c in check_discrimination(cohort, true) {
        out.push_str(&format!(
            "{:<12} {:>6} {:>9}  {}\n",
            c.scope,
            c.size,
            c.threshold,
            if c.pass { "pass" } else { "FAIL" }
        ));
    }
    out
}

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    let mut spec = if args.paper_default {
        GenSpec::paper_default(0)
    } else {
        let path = args.config.as_ref().expect("clap enforces --config");
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
        parse_gen_config(&text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let cohort = generate(&spec).map_err(|e| Failure::new(EXIT_USAGE, e))?;

    let mut csv = Vec::new();
    write_cohort(&cohort, &mut csv).map_err(|e| Failure::new(EXIT_DATA, e))?;
    let csv = String::from_utf8(csv).expect("csv output is utf-8");
    emit(args.output.as_deref(), &csv)?;

    let table = discrimination_table(&cohort);
    if args.output.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs) -> CmdResult {
    let cohort = read_cohort_file(&args.input)
        .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", args.input.display())))?;
    print!("{}", discrimination_table(&cohort));
    Ok(())
}
