//! Command-line front end: stream CSV traces through monitors, generate
//! benchmark traces, time the engines, and cross-check them against the
//! reference semantics.

pub mod check;
pub mod csvio;
pub mod error;
pub mod monitor;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use seqmon::workload::{median_of, run_dense, run_discrete, BenchReport, BenchSpec, Property, Trace};
use seqmon::{parse, Time, TimeModel};

pub use check::{run_check, Builtin, CheckConfig, CheckSummary, Counterexample, Engines};
pub use error::CliError;
pub use monitor::{monitor_dense, monitor_discrete, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Discrete,
    Dense,
}

#[derive(Debug, Parser)]
#[command(name = "seqmon", version, about = "Online monitors for past-time metric temporal logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monitor a CSV trace and print the verdicts.
    Monitor(MonitorArgs),
    /// Write a benchmark trace as CSV.
    Gen(GenArgs),
    /// Time a benchmark property and report throughput and state size.
    Bench(BenchArgs),
    /// Compare the engines with the reference semantics on random inputs.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct MonitorArgs {
    #[arg(long, value_enum, default_value = "discrete")]
    pub mode: Mode,
    #[arg(long)]
    pub formula: String,
    /// Trace file, or `-` for standard input.
    #[arg(long, default_value = "-")]
    pub input: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Rows per dense chunk.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub chunk_rows: u64,
    /// Origin of the dense time line.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t0: Time,
    /// Treat values before the first step as false under `historically`.
    #[arg(long)]
    pub strong_historically: bool,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// One of qpr(a,b), pandq(a,b), delay(b).
    #[arg(long)]
    pub property: Property,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub len: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probabilities of p, q, r in qpr traces.
    #[arg(long, default_value = "0.5,0.1,0.1", value_parser = parse_densities)]
    pub densities: Densities,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Densities(pub [f64; 3]);

fn parse_densities(s: &str) -> Result<Densities, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[a, b, c] if parts.iter().all(|d| (0.0..=1.0).contains(d)) => Ok(Densities([a, b, c])),
        _ => Err("expected three probabilities in [0,1]".into()),
    }
}

impl TraceArgs {
    fn spec(&self) -> BenchSpec {
        let mut spec = BenchSpec::new(self.property, self.len as usize).with_seed(self.seed);
        spec.densities = self.densities.0;
        spec
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub trace: TraceArgs,
    /// Output format; dense rows end at times 1, 2, ...
    #[arg(long, value_enum, default_value = "discrete")]
    pub mode: Mode,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub trace: TraceArgs,
    #[arg(long, value_enum, default_value = "discrete")]
    pub mode: Mode,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub chunk_rows: u64,
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Also write the CSV report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Check this formula only; random formulas otherwise.
    #[arg(long)]
    pub formula: Option<String>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check one time model only.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Directory for counterexample files.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn open_input(path: &str) -> Result<Box<dyn Read + Send>, CliError> {
    if path == "-" {
        return Ok(Box::new(io::stdin()));
    }
    let file = File::open(path).map_err(|e| CliError::Data(format!("cannot open {path}: {e}")))?;
    Ok(Box::new(BufReader::new(file)))
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Runs one command, writing regular output to its destination.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Monitor(a) => cmd_monitor(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Check(a) => cmd_check(a, &Builtin),
    }
}

fn cmd_monitor(a: MonitorArgs) -> Result<(), CliError> {
    let model = match a.mode {
        Mode::Discrete => TimeModel::Discrete,
        Mode::Dense => TimeModel::Dense,
    };
    let f = parse(&a.formula, model)?;
    let cfg = RunConfig { chunk_rows: a.chunk_rows as usize, t0: a.t0, strong_historically: a.strong_historically };
    let input = open_input(&a.input)?;
    let mut out = open_output(a.output.as_ref())?;
    match a.mode {
        Mode::Discrete => monitor_discrete(&f, input, &mut out, &cfg)?,
        Mode::Dense => monitor_dense(&f, input, &mut out, &cfg)?,
    }
    out.flush()?;
    Ok(())
}

/// Dense CSV of a step trace: row `k` holds on `(k-1, k)`.
pub fn write_dense_trace<W: Write>(trace: &Trace, mut w: W) -> io::Result<()> {
    writeln!(w, "time,{}", trace.names.join(","))?;
    for (k, row) in trace.rows().enumerate() {
        let cells: Vec<&str> = row.iter().map(|&v| if v == 1 { "1" } else { "0" }).collect();
        writeln!(w, "{},{}", k + 1, cells.join(","))?;
    }
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    let trace = a.trace.spec().generate();
    let mut out = open_output(a.output.as_ref())?;
    match a.mode {
        Mode::Discrete => trace.write_csv(&mut out)?,
        Mode::Dense => write_dense_trace(&trace, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Median timing of the property over its generated trace.
pub fn bench(spec: &BenchSpec, mode: Mode, chunk_rows: usize, runs: usize) -> BenchReport {
    let trace = spec.generate();
    let f = spec.property.formula();
    match mode {
        Mode::Discrete => median_of(runs, || run_discrete(&format!("{}/discrete", spec.property), &f, &trace)),
        Mode::Dense => median_of(runs, || run_dense(&format!("{}/dense", spec.property), &f, &trace, chunk_rows)),
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let report = bench(&a.trace.spec(), a.mode, a.chunk_rows as usize, a.runs as usize);
    let text = format!("{}\n{}\n", BenchReport::CSV_HEADER, report.csv_row());
    if let Some(path) = &a.report {
        std::fs::write(path, &text)?;
    }
    io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

/// `check` with the engines supplied by the caller.
pub fn cmd_check(a: CheckArgs, engines: &dyn Engines) -> Result<(), CliError> {
    let cfg = CheckConfig { formula: a.formula, trials: a.trials, seed: a.seed, mode: a.mode };
    match run_check(&cfg, engines)? {
        Ok(s) => {
            println!("{} discrete and {} dense instances agree", s.discrete_trials, s.dense_trials);
            Ok(())
        }
        Err(cex) => {
            if let Some(dir) = &a.output {
                cex.write_artifacts(dir)?;
            }
            Err(CliError::Mismatch(cex.to_string()))
        }
    }
}
