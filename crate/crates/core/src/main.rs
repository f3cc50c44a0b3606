//! Command-line front end: solvers, traces, equivalence verification,
//! diagram export, operation-count benchmarks, and the tangle/weave
//! pipeline.
//!
//! Exit codes: 0 on success (and for `verify`, only when the isomorphism
//! holds), 1 on domain failures (counterexamples, cycles, undefined chunks,
//! resource guards), 2 on usage errors. Requested output goes to stdout (or
//! `-o FILE`); diagnostics go to stderr. Identical invocations produce
//! byte-identical output unless `--wall` is given.

use std::fmt::Write as _;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use josephus::circle::Circle;
use josephus::dot::{paired_diagram, single_diagram, DiagramOptions};
use josephus::dynamics::{
    circle_system, imperative_system, system_map, verify_canonical, Reading,
};
use josephus::literate;
use josephus::solvers::{
    imperative_trace, zipper_trace, Algorithm, ImperativeState, Problem,
};
use josephus::{canonical_map, KillSequence};

#[derive(Parser)]
#[command(
    name = "josephus",
    version,
    about = "Solvers, equivalence checking, diagrams, benchmarks, and a literate pipeline for the Josephus elimination game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the survivor for an instance.
    Solve(SolveArgs),
    /// Emit the kill-by-kill record as JSON or CSV.
    Trace(TraceArgs),
    /// Check that the circle and cursor-and-list models are equivalent.
    Verify(VerifyArgs),
    /// Export an internal diagram of one or both state systems as DOT.
    Diagram(DiagramArgs),
    /// Report deterministic operation counts across a size series.
    Bench(BenchArgs),
    /// Splice a literate document's chunks into source text.
    Tangle(TangleArgs),
    /// Render a literate document as cross-referenced markdown notes.
    Weave(WeaveArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Number of players.
    #[arg(short, long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Kill step: every m-th surviving player is removed.
    #[arg(short, long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Solver to run (defaults to the recurrence, or the imperative
    /// simulation when --order is given).
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    /// Also print the full elimination order.
    #[arg(long)]
    order: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(short, long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(short, long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = TraceFormat::Json)]
    format: TraceFormat,
    /// Include the model state after each kill (JSON only).
    #[arg(long, value_enum)]
    states: Option<StateKind>,
    /// Write to a file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Universe size: states are built over labels 1..=SIZE.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    universe: u64,
    #[arg(short, long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Which commuting square to check: the elimination round on both
    /// sides, or the rotation against the cursor update alone.
    #[arg(long, value_enum, default_value_t = ReadingArg::Killstep)]
    reading: ReadingArg,
    /// Worker threads for the exhaustive scan; the verdict is identical at
    /// any setting.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(usize))]
    jobs: usize,
}

#[derive(Args)]
struct DiagramArgs {
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    universe: u64,
    #[arg(short, long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Draw both systems with dashed edges for the canonical map.
    #[arg(long, conflicts_with = "system")]
    map: bool,
    /// Which single system to draw.
    #[arg(long, value_enum, default_value_t = SystemPick::H)]
    system: SystemPick,
    /// Refuse to draw more states than this.
    #[arg(long, default_value_t = 200)]
    cap: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "512,1024,2048,4096")]
    sizes: Vec<u64>,
    #[arg(short, long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    /// Solvers to run.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![
        AlgorithmArg::Imperative,
        AlgorithmArg::Zipper,
        AlgorithmArg::OrderStatistic,
        AlgorithmArg::Recurrence,
    ])]
    solvers: Vec<AlgorithmArg>,
    #[arg(long, value_enum, default_value_t = BenchFormat::Text)]
    format: BenchFormat,
    /// Also measure wall-clock time (nondeterministic).
    #[arg(long)]
    wall: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TangleArgs {
    /// Literate source file.
    file: PathBuf,
    /// Chunk to expand.
    #[arg(long)]
    root: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WeaveArgs {
    /// Literate source file.
    file: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum AlgorithmArg {
    /// Cursor-and-list simulation (alias: naive).
    #[value(alias = "naive")]
    Imperative,
    Zipper,
    OrderStatistic,
    Recurrence,
    ClosedForm,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Algorithm {
        match a {
            AlgorithmArg::Imperative => Algorithm::Imperative,
            AlgorithmArg::Zipper => Algorithm::Zipper,
            AlgorithmArg::OrderStatistic => Algorithm::OrderStatistic,
            AlgorithmArg::Recurrence => Algorithm::Recurrence,
            AlgorithmArg::ClosedForm => Algorithm::ClosedFormM2,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum TraceFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum StateKind {
    Circle,
    Imperative,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum ReadingArg {
    Killstep,
    Line6,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum SystemPick {
    H,
    P,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum BenchFormat {
    Text,
    Csv,
}

fn error_prefix() -> &'static str {
    let styled = std::io::stderr().is_terminal()
        && std::env::var("JOSEPHUS_COLOR").map(|v| v != "0").unwrap_or(true);
    if styled {
        "\x1b[31merror:\x1b[0m"
    } else {
        "error:"
    }
}

/// A failed run: message to stderr plus the exit code to use.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), code: 1 }
    }

    fn usage(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), code: 2 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{} {}", error_prefix(), failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Diagram(args) => cmd_diagram(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Tangle(args) => cmd_tangle(args),
        Command::Weave(args) => cmd_weave(args),
    }
}

fn emit(output: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::domain(format!("cannot write to stdout: {e}")))
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Failure> {
    let problem = Problem::new(args.n, args.m).map_err(|e| Failure::usage(e.to_string()))?;
    let algorithm: Algorithm = args
        .algorithm
        .unwrap_or(if args.order { AlgorithmArg::Imperative } else { AlgorithmArg::Recurrence })
        .into();
    if args.order && !algorithm.produces_order() {
        return Err(Failure::usage(format!(
            "--order needs a solver that reports the elimination order; {} does not",
            algorithm.name()
        )));
    }
    let solved = algorithm
        .solve(&problem)
        .map_err(|e| Failure::usage(e.to_string()))?
        .value;
    let mut out = String::new();
    if let Some(order) = solved.order.filter(|_| args.order) {
        let order: Vec<String> = order.iter().map(u64::to_string).collect();
        writeln!(out, "order: {}", order.join(" ")).expect("string write");
        writeln!(out, "survivor: {}", solved.survivor).expect("string write");
    } else {
        writeln!(out, "{}", solved.survivor).expect("string write");
    }
    emit(None, &out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TraceOutput {
    n: u64,
    m: u64,
    order: Vec<u64>,
    survivor: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<serde_json::Value>,
}

fn cmd_trace(args: TraceArgs) -> Result<ExitCode, Failure> {
    let problem = Problem::new(args.n, args.m).map_err(|e| Failure::usage(e.to_string()))?;
    let content = match args.format {
        TraceFormat::Csv => {
            if args.states.is_some() {
                return Err(Failure::usage(
                    "--states is only available with --format json",
                ));
            }
            josephus::simulate_imperative(&problem).csv()
        }
        TraceFormat::Json => {
            let (kills, states): (KillSequence, Option<serde_json::Value>) = match args.states {
                None => (josephus::simulate_imperative(&problem), None),
                Some(StateKind::Circle) => {
                    let (kills, states): (KillSequence, Vec<Circle<u64>>) = zipper_trace(&problem);
                    (kills, Some(serde_json::to_value(states).expect("serializable")))
                }
                Some(StateKind::Imperative) => {
                    let (kills, states): (KillSequence, Vec<ImperativeState>) =
                        imperative_trace(&problem);
                    (kills, Some(serde_json::to_value(states).expect("serializable")))
                }
            };
            let output = TraceOutput {
                n: kills.n,
                m: kills.m,
                order: kills.order,
                survivor: kills.survivor,
                states,
            };
            serde_json::to_string(&output).expect("serializable") + "\n"
        }
    };
    emit(args.output.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let universe: Vec<u64> = (1..=args.universe).collect();
    let reading = match args.reading {
        ReadingArg::Killstep => Reading::KillStep,
        ReadingArg::Line6 => Reading::Line6Next,
    };
    let report = if args.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| Failure::domain(format!("cannot build thread pool: {e}")))?;
        pool.install(|| verify_canonical(&universe, args.m, reading, true))
    } else {
        verify_canonical(&universe, args.m, reading, false)
    }
    .map_err(|e| Failure::domain(e.to_string()))?;
    let json = serde_json::to_string(&report).expect("serializable");
    emit(None, &(json + "\n"))?;
    Ok(if report.isomorphism {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_diagram(args: DiagramArgs) -> Result<ExitCode, Failure> {
    let universe: Vec<u64> = (1..=args.universe).collect();
    let opts = DiagramOptions { cap: args.cap };
    let domain = |e: josephus::DynamicsError| Failure::domain(e.to_string());
    let dot = if args.map {
        let source = circle_system(&universe, args.m).map_err(domain)?;
        let target = imperative_system(&universe, args.m).map_err(domain)?;
        let map = system_map(source, target, |c| canonical_map(c, args.m)).map_err(domain)?;
        paired_diagram(&map, "H", "P", &opts).map_err(domain)?
    } else {
        match args.system {
            SystemPick::H => {
                let system = circle_system(&universe, args.m).map_err(domain)?;
                single_diagram(&system, "H", &opts).map_err(domain)?
            }
            SystemPick::P => {
                let system = imperative_system(&universe, args.m).map_err(domain)?;
                single_diagram(&system, "P", &opts).map_err(domain)?
            }
        }
    };
    emit(args.output.as_ref(), &dot)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Failure> {
    if args.sizes.is_empty() {
        return Err(Failure::usage("at least one size is required"));
    }
    let mut rows: Vec<(String, u64, u64, f64)> = Vec::new();
    for &arg in &args.solvers {
        let algorithm: Algorithm = arg.into();
        for &n in &args.sizes {
            let problem = Problem::new(n, args.m).map_err(|e| Failure::usage(e.to_string()))?;
            let started = Instant::now();
            let counted = algorithm
                .solve(&problem)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;
            rows.push((algorithm.name().to_string(), n, counted.ops, wall_ms));
        }
    }
    let mut content = String::new();
    match args.format {
        BenchFormat::Csv => {
            content.push_str(if args.wall { "solver,n,ops,wall_ms\n" } else { "solver,n,ops\n" });
            for (solver, n, ops, wall) in &rows {
                if args.wall {
                    writeln!(content, "{solver},{n},{ops},{wall:.3}").expect("string write");
                } else {
                    writeln!(content, "{solver},{n},{ops}").expect("string write");
                }
            }
        }
        BenchFormat::Text => {
            if args.wall {
                writeln!(content, "{:<16} {:>10} {:>14} {:>10}", "solver", "n", "ops", "wall_ms")
                    .expect("string write");
            } else {
                writeln!(content, "{:<16} {:>10} {:>14}", "solver", "n", "ops")
                    .expect("string write");
            }
            for (solver, n, ops, wall) in &rows {
                if args.wall {
                    writeln!(content, "{solver:<16} {n:>10} {ops:>14} {wall:>10.3}")
                        .expect("string write");
                } else {
                    writeln!(content, "{solver:<16} {n:>10} {ops:>14}").expect("string write");
                }
            }
        }
    }
    emit(args.output.as_ref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn read_source(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("cannot read {}: {e}", path.display())))
}

fn cmd_tangle(args: TangleArgs) -> Result<ExitCode, Failure> {
    let source = read_source(&args.file)?;
    let doc = literate::parse(&source).map_err(|e| Failure::domain(e.to_string()))?;
    let tangled =
        literate::tangle(&doc, &args.root).map_err(|e| Failure::domain(e.to_string()))?;
    emit(args.output.as_ref(), &tangled)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_weave(args: WeaveArgs) -> Result<ExitCode, Failure> {
    let source = read_source(&args.file)?;
    let doc = literate::parse(&source).map_err(|e| Failure::domain(e.to_string()))?;
    emit(args.output.as_ref(), &literate::weave(&doc))?;
    Ok(ExitCode::SUCCESS)
}
