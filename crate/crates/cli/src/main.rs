use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mincut_core::graph::generators::GeneratorSpec;
use mincut_core::rational::parse_rational;
use mincut_core::seq_mincut::DEFAULT_SAMPLE_D;
use mincut_core::sim::TraceSink;
use mincut_core::{EngineConfig, Execution, Rational};

mod experiment;

use experiment::{Algorithm, ExperimentConfig, Failure, GraphSource};

#[derive(Parser, Debug)]
#[command(name = "mincut", version, about = "Minimum cuts in a simulated CONGEST network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sequential (1+ε)-approximate minimum cut.
    SeqApprox(Common),
    /// Sequential exact minimum cut.
    SeqExact(Common),
    /// Distributed (1+ε)-approximate minimum cut.
    DistApprox(Common),
    /// Distributed exact minimum cut.
    DistExact(Common),
    /// Distributed estimate of the minimum cut value only.
    DistValue(Common),
    /// Smallest cut 1-respecting the MST, computed distributedly.
    OneRespect(Common),
    /// Brute-force minimum cut.
    Oracle(Common),
    /// Write a generated graph in edge-list format.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct Source {
    /// Edge-list file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec, e.g. `planted:10,10,3,0.9`.
    #[arg(long)]
    gen: Option<GeneratorSpec>,
}

#[derive(Args, Debug)]
struct Common {
    #[command(flatten)]
    source: Source,
    /// Approximation parameter, as a decimal or a fraction.
    #[arg(long, default_value = "0.5", value_parser = parse_eps)]
    eps: Rational,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials; with --gen every trial draws a new graph from seed + trial.
    #[arg(long, default_value_t = 1)]
    trials: u32,
    #[arg(long, default_value_t = 1_000_000)]
    max_rounds: u64,
    /// Messages allowed per edge, per direction, per round.
    #[arg(long, default_value_t = 1)]
    congestion: u32,
    /// Failure exponent d of the sampling probability.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_D)]
    sample_d: u32,
    /// Report file (JSON lines); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every delivered message as JSON lines to this file.
    #[arg(long, num_args = 0..=1, default_missing_value = "trace.jsonl")]
    trace: Option<PathBuf>,
    /// Run the engine single-threaded.
    #[arg(long)]
    sequential: bool,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Generator spec.
    #[arg(long)]
    gen: GeneratorSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_eps(text: &str) -> Result<Rational, String> {
    let eps = parse_rational(text).map_err(|e| e.to_string())?;
    if eps <= Rational::from_integer(0) || eps > Rational::from_integer(1) {
        return Err(format!("eps must lie in (0, 1], got {eps}"));
    }
    Ok(eps)
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(algorithm: Algorithm, c: Common) -> Result<(), Failure> {
    let source = match (c.source.graph, c.source.gen) {
        (Some(p), _) => GraphSource::File(p),
        (None, Some(spec)) => GraphSource::Generator(spec),
        (None, None) => return Err(Failure::Usage("one of --graph or --gen is required".into())),
    };
    let trace = match &c.trace {
        Some(p) => Some(TraceSink::new(BufWriter::new(File::create(p).map_err(|e| Failure::Io(p.display().to_string(), e))?))),
        None => None,
    };
    let engine = EngineConfig {
        congestion: c.congestion,
        max_rounds: c.max_rounds,
        seed: c.seed,
        execution: if c.sequential { Execution::Sequential } else { Execution::default() },
        trace,
    };
    let config = ExperimentConfig { algorithm, source, eps: c.eps, seed: c.seed, trials: c.trials, sample_d: c.sample_d, verbose: c.verbose };
    let mut out = open_out(&c.out).map_err(|e| Failure::Io("report".into(), e))?;
    let result = experiment::run_experiment(&config, engine.clone(), &mut out);
    out.flush().map_err(|e| Failure::Io("report".into(), e))?;
    if let Some(t) = &engine.trace {
        t.flush();
    }
    result
}

fn generate(args: GenArgs) -> Result<(), Failure> {
    let g = mincut_core::graph::generate(&args.gen, args.seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = open_out(&args.out).map_err(|e| Failure::Io("output".into(), e))?;
    out.write_all(mincut_core::graph::io::write_edge_list(&g).as_bytes()).map_err(|e| Failure::Io("output".into(), e))?;
    out.flush().map_err(|e| Failure::Io("output".into(), e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SeqApprox(c) => run(Algorithm::SeqApprox, c),
        Command::SeqExact(c) => run(Algorithm::SeqExact, c),
        Command::DistApprox(c) => run(Algorithm::DistApprox, c),
        Command::DistExact(c) => run(Algorithm::DistExact, c),
        Command::DistValue(c) => run(Algorithm::DistValue, c),
        Command::OneRespect(c) => run(Algorithm::OneRespect, c),
        Command::Oracle(c) => run(Algorithm::Oracle, c),
        Command::Gen(a) => generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mincut: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
