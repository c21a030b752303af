use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use reduced_nn::io::{self, CertificateDoc, NetworkDoc, ResultDoc};
use reduced_nn::lab::{
    architecture_search, emit_error_curve, emit_function_sweep, empirical_worst_error, make_example1_network,
    make_example2_network, prune_magnitude, write_error_curve, write_function_sweep, Approximant, Sampler, Schedule,
    SdpSynthesizer, SearchConfig, StopRule, EXAMPLE1_SEED,
};
use reduced_nn::qc::AnalysisOptions;
use reduced_nn::sdp::{Backend, SolveStatus, SolverSettings};
use reduced_nn::synthesis::VerifyOptions;
use reduced_nn::{synthesize, verify_pair_bound, Error, InputBox, LayerwiseNetwork, Structure, SynthesisOptions};

/// Reduced-order ReLU network synthesis with certified error bounds.
#[derive(Debug, Parser)]
#[command(name = "reduced-nn", version)]
struct Cli {
    #[command(flatten)]
    solver: SolverArgs,

    /// Log level for diagnostics on standard error.
    #[arg(long, global = true, default_value = "warn")]
    log: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Solver tolerance on relative gap and infeasibility.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Solver iteration budget.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_solver_iters: usize,

    /// SDP backend: `interior-point` (built in) or `clarabel`.
    #[arg(long, global = true, default_value = "interior-point")]
    backend: Backend,

    /// Print solver progress.
    #[arg(long, global = true)]
    verbose_solver: bool,
}

impl SolverArgs {
    fn settings(&self) -> SolverSettings {
        SolverSettings { tol: self.tol, max_iters: self.max_solver_iters, verbose: self.verbose_solver }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesise a reduced network and its error bound.
    Synthesize(SynthArgs),
    /// Certify an error bound for a given full/reduced pair.
    Verify(VerifyArgs),
    /// Grow the reduced architecture until a threshold is met.
    Search(SearchArgs),
    /// Zero the smallest-magnitude weights of a network.
    Prune(PruneArgs),
    /// Reproduce one of the two reference experiments.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Full-order network JSON.
    #[arg(long)]
    net: PathBuf,
    /// Reduced layer widths, comma separated (e.g. `3` or `3,3,3`).
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    /// Input box JSON (`{"lower": [...], "upper": [...]}`).
    #[arg(long = "box")]
    input_box: PathBuf,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Restrict Ψ to a strictly block-lower-triangular (feed-forward) pattern.
    #[arg(long)]
    feedforward: bool,
    /// Use diagonal cross multipliers.
    #[arg(long)]
    diag_multipliers: bool,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ObjectiveArgs {
    /// Weight on γₓ.
    #[arg(long, default_value_t = 1.0)]
    w1: f64,
    /// Weight on γ.
    #[arg(long, default_value_t = 1.0)]
    w2: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    net: PathBuf,
    /// Reduced network JSON (reduced, result or layerwise document).
    #[arg(long)]
    reduced: PathBuf,
    #[arg(long = "box")]
    input_box: PathBuf,
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Add pairwise slope constraints.
    #[arg(long)]
    slope: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StopArg {
    Either,
    Both,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Sample count for empirical errors (default: 10⁴ grid in 1-D, 10⁵ uniform otherwise).
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for uniform sampling.
    #[arg(long, default_value_t = reduced_nn::lab::DEFAULT_SAMPLE_SEED)]
    seed: u64,
}

impl SamplingArgs {
    fn sampler(&self, dim: usize) -> Sampler {
        match (self.samples, dim) {
            (Some(n), 1) => Sampler::Grid(n),
            (Some(n), _) => Sampler::Uniform { n, seed: self.seed },
            (None, 1) => Sampler::Grid(10_000),
            (None, _) => Sampler::Uniform { n: 100_000, seed: self.seed },
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long = "box")]
    input_box: PathBuf,
    /// Threshold on the certified bound.
    #[arg(long)]
    eps1: f64,
    /// Threshold on the sampled worst error.
    #[arg(long)]
    eps2: f64,
    #[arg(long, default_value_t = 10)]
    max_iters: usize,
    /// Starting widths of the grow schedule.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    start: Vec<usize>,
    /// Largest width before another layer is added.
    #[arg(long, default_value_t = 10)]
    ceiling: usize,
    #[arg(long, value_enum, default_value = "either")]
    stop: StopArg,
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    /// Directory for `trace.csv`, `error_curve.csv` and `best.json`.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct PruneArgs {
    #[arg(long)]
    net: PathBuf,
    /// Number of weight entries to zero.
    #[arg(long)]
    count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DemoName {
    Example1,
    Example2,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[arg(value_enum)]
    name: DemoName,
    /// Seed for the example-1 weights and for uniform sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Points in each function sweep and empirical error estimate.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Largest reduced width tried in example 1.
    #[arg(long, default_value_t = 10)]
    max_width: usize,
    /// Input interval for example 2.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hi: f64,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    /// The SDP was infeasible or the solver gave up.
    Solve(anyhow::Error),
    /// Bad input or arguments.
    Usage(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) | Error::SolverFailed(_) | Error::SearchExhausted(_) | Error::SingularRecovery { .. } => {
                Failure::Solve(e.into())
            }
            other => Failure::Usage(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::new().parse_filters(&cli.log).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Solve(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Synthesize(a) => cmd_synthesize(a, &cli.solver),
        Command::Verify(a) => cmd_verify(a, &cli.solver),
        Command::Search(a) => cmd_search(a, &cli.solver),
        Command::Prune(a) => cmd_prune(a),
        Command::Demo(a) => match a.name {
            DemoName::Example1 => demo_example1(a, &cli.solver),
            DemoName::Example2 => demo_example2(a, &cli.solver),
        },
    }
}

fn load_network(path: &Path) -> Result<LayerwiseNetwork, Failure> {
    io::read_network(path).map_err(|e| Failure::Usage(anyhow::Error::new(e).context(format!("reading {}", path.display()))))
}

fn load_box(path: &Path) -> Result<InputBox, Failure> {
    io::read_box(path).map_err(|e| Failure::Usage(anyhow::Error::new(e).context(format!("reading {}", path.display()))))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?,
        None => say(text),
    }
    Ok(())
}

/// Writes a line to standard output; a closed pipe (e.g. `| head`) is not an error.
fn say(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing to standard output: {e}");
        }
    }
}

fn warn_status(status: SolveStatus, message: &str) {
    if status != SolveStatus::Optimal {
        eprintln!("warning: solver status {} ({message})", status.as_str());
    }
}

fn cmd_synthesize(a: &SynthArgs, solver: &SolverArgs) -> CliResult {
    let full = load_network(&a.net)?;
    let bx = load_box(&a.input_box)?;
    let opts = SynthesisOptions {
        w1: a.objective.w1,
        w2: a.objective.w2,
        structure: if a.feedforward { Structure::StrictFeedforward } else { Structure::GeneralImplicit },
        diagonal_multiplier_mode: a.diag_multipliers,
        backend: solver.backend,
        settings: solver.settings(),
        ..Default::default()
    };
    let result = synthesize(&full, &a.dims, &bx, &opts)?;
    warn_status(result.solution.status, &result.solution.message);
    emit(&io::to_json_pretty(&ResultDoc::from(&result))?, a.out.as_deref())
}

fn cmd_verify(a: &VerifyArgs, solver: &SolverArgs) -> CliResult {
    let full = load_network(&a.net)?;
    let reduced = io::read_reduced_any(&a.reduced)
        .map_err(|e| Failure::Usage(anyhow::Error::new(e).context(format!("reading {}", a.reduced.display()))))?;
    let bx = load_box(&a.input_box)?;
    let opts = VerifyOptions {
        analysis: AnalysisOptions { slope: a.slope },
        backend: solver.backend,
        settings: solver.settings(),
    };
    let cert = verify_pair_bound(&full, &reduced, &bx, a.objective.w1, a.objective.w2, &opts)?;
    match cert.status {
        SolveStatus::Infeasible => return Err(Error::Infeasible(cert.solution.message).into()),
        SolveStatus::Failed => return Err(Error::SolverFailed(cert.solution.message).into()),
        s => warn_status(s, &cert.solution.message),
    }
    emit(&io::to_json_pretty(&CertificateDoc::from(&cert))?, a.out.as_deref())
}

fn cmd_search(a: &SearchArgs, solver: &SolverArgs) -> CliResult {
    let full = load_network(&a.net)?;
    let bx = load_box(&a.input_box)?;
    let cfg = SearchConfig {
        eps1: a.eps1,
        eps2: a.eps2,
        schedule: Schedule::Grow { start: a.start.clone(), ceiling: a.ceiling },
        max_iters: a.max_iters,
        stop: match a.stop {
            StopArg::Either => StopRule::Either,
            StopArg::Both => StopRule::Both,
        },
        sampler: a.sampling.sampler(bx.dim()),
    };
    let synth = SdpSynthesizer {
        opts: SynthesisOptions {
            w1: a.objective.w1,
            w2: a.objective.w2,
            backend: solver.backend,
            settings: solver.settings(),
            ..Default::default()
        },
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    match architecture_search(&full, &bx, &cfg, &synth) {
        Ok((best, trace)) => {
            write_text(&a.out_dir.join("trace.csv"), &trace.to_csv())?;
            write_error_curve(&emit_error_curve(&trace), &a.out_dir.join("error_curve.csv"))?;
            write_text(&a.out_dir.join("best.json"), &io::to_json_pretty(&ResultDoc::from(&best))?)?;
            say(trace.to_csv().trim_end());
            Ok(())
        }
        Err(Error::SearchExhausted(trace)) => {
            write_text(&a.out_dir.join("trace.csv"), &trace.to_csv())?;
            Err(Error::SearchExhausted(trace).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_prune(a: &PruneArgs) -> CliResult {
    let full = load_network(&a.net)?;
    let pruned = prune_magnitude(&full, a.count)?;
    emit(&io::to_json_pretty(&NetworkDoc::from(&pruned))?, a.out.as_deref())
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Example 1: bound and sampled error for reduced widths `1..=max_width`.
fn demo_example1(a: &DemoArgs, solver: &SolverArgs) -> CliResult {
    let seed = a.seed.unwrap_or(EXAMPLE1_SEED);
    let full = make_example1_network(seed);
    let bx = InputBox::uniform(1, -10.0, 10.0)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    write_text(&a.out_dir.join("example1_network.json"), &io::to_json_pretty(&NetworkDoc::from(&full))?)?;

    let cfg = SearchConfig {
        // Thresholds that never fire: the whole schedule is traced.
        eps1: f64::MIN_POSITIVE,
        eps2: f64::MIN_POSITIVE,
        schedule: Schedule::Explicit((1..=a.max_width).map(|m| vec![m]).collect()),
        max_iters: a.max_width,
        stop: StopRule::Either,
        sampler: Sampler::Grid(a.samples),
    };
    // Weighting γₓ by sup ‖x‖² makes the SDP objective equal the reported bound.
    let synth = SdpSynthesizer {
        opts: SynthesisOptions {
            w1: bx.max_norm_sq(),
            w2: 1.0,
            backend: solver.backend,
            settings: solver.settings(),
            ..Default::default()
        },
    };
    let (best, trace) = architecture_search(&full, &bx, &cfg, &synth)?;
    write_text(&a.out_dir.join("example1_trace.csv"), &trace.to_csv())?;
    write_error_curve(&emit_error_curve(&trace), &a.out_dir.join("example1_error_curve.csv"))?;
    let xs = linspace(-10.0, 10.0, a.samples);
    write_function_sweep(&emit_function_sweep(&full, &best.reduced, &xs)?, &a.out_dir.join("example1_sweep.csv"))?;
    write_text(&a.out_dir.join("example1_best.json"), &io::to_json_pretty(&ResultDoc::from(&best))?)?;
    say(trace.to_csv().trim_end());
    Ok(())
}

/// Example 2: reduced networks (full and diagonal multipliers) against the
/// 32-weight magnitude-pruned baseline.
fn demo_example2(a: &DemoArgs, solver: &SolverArgs) -> CliResult {
    let full = make_example2_network();
    let bx = InputBox::uniform(1, a.lo, a.hi)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    write_text(&a.out_dir.join("example2_network.json"), &io::to_json_pretty(&NetworkDoc::from(&full))?)?;

    let partition = [3, 3, 3];
    let base = SynthesisOptions { backend: solver.backend, settings: solver.settings(), ..Default::default() };
    let reduced = synthesize(&full, &partition, &bx, &base)?;
    let diag = synthesize(&full, &partition, &bx, &SynthesisOptions { diagonal_multiplier_mode: true, ..base })?;
    let pruned = prune_magnitude(&full, 32)?;

    let xs = linspace(a.lo, a.hi, a.samples);
    let candidates: [(&str, &dyn Approximant); 3] =
        [("reduced", &reduced.reduced), ("reduced_diag", &diag.reduced), ("pruned32", &pruned)];
    let mut columns = Vec::new();
    for (name, approx) in candidates {
        let rows = emit_function_sweep(&full, approx, &xs)?;
        write_function_sweep(&rows, &a.out_dir.join(format!("example2_sweep_{name}.csv")))?;
        columns.push(rows);
    }
    let mut text = String::from("x,f,g_reduced,g_reduced_diag,g_pruned32\n");
    for (i, x) in xs.iter().enumerate() {
        text.push_str(&format!("{},{},{},{},{}\n", x, columns[0][i].f, columns[0][i].g, columns[1][i].g, columns[2][i].g));
    }
    write_text(&a.out_dir.join("example2_comparison.csv"), &text)?;

    let sampler = Sampler::Grid(a.samples);
    let mut summary = String::from("model,bound,empirical\n");
    for (name, bound, approx) in [
        ("reduced", Some(reduced.bound_sup), &reduced.reduced as &dyn Approximant),
        ("reduced_diag", Some(diag.bound_sup), &diag.reduced),
        ("pruned32", None, &pruned),
    ] {
        let q = empirical_worst_error(&full, approx, &bx, sampler)?.q;
        summary.push_str(&format!("{name},{},{q}\n", bound.map(|b| b.to_string()).unwrap_or_default()));
    }
    write_text(&a.out_dir.join("example2_summary.csv"), &summary)?;
    write_text(&a.out_dir.join("example2_reduced.json"), &io::to_json_pretty(&ResultDoc::from(&reduced))?)?;
    write_text(&a.out_dir.join("example2_reduced_diag.json"), &io::to_json_pretty(&ResultDoc::from(&diag))?)?;
    let constant = pruned.output(&DVector::from_element(1, 0.5 * (a.lo + a.hi)))?[0];
    say(summary.trim_end());
    say(&format!("pruned32 output at the box centre: {constant}"));
    Ok(())
}
