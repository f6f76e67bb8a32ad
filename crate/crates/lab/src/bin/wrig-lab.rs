use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use wrig::bipartization::counting::{count_sequences_exact, expected_sequence_count};
use wrig::bipartization::default_max_rematch;
use wrig::cut::{brute_force_max_cut, brute_force_min_discrepancy};
use wrig::io::{parse_matrix, write_coloring, write_matrix};
use wrig::{
    extract_coloring, majority_cut, random_cut, sample_matrix, weak_bipartization, Coloring,
    MajorityConfig, ModelParams, RepresentationMatrix, Seed,
};
use wrig_lab::{exit, run_to_files, ExperimentSpec, LabError};

#[derive(Parser)]
#[command(
    name = "wrig-lab",
    version,
    about = "Max-cut experiments on weighted random intersection graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a representation matrix.
    Sample(SampleArgs),
    /// Run a cut algorithm on a matrix file.
    Solve(SolveArgs),
    /// Run weak bipartization on a matrix file.
    Bipartize(BipartizeArgs),
    /// Count closed vertex-label sequences, or their expectation.
    CountSequences(CountArgs),
    /// Run an experiment spec.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["m", "alpha", "c"])))]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    /// m = floor(n^alpha)
    #[arg(long)]
    alpha: Option<f64>,
    /// m = n and p = c/n
    #[arg(long, conflicts_with = "p")]
    c: Option<f64>,
    #[arg(long, required_unless_present = "c")]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Random,
    Majority,
    Exact,
    Mindisc,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Matrix file; `-` reads stdin.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    coloring_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BipartizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_rematch: Option<usize>,
    #[arg(long)]
    coloring_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Exit with status 3 when the re-matching budget runs out.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "expect"])))]
struct CountArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Evaluate the expectation for G(n, m, p) instead of counting.
    #[arg(long, requires_all = ["n", "m", "p"])]
    expect: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Overrides `workers` from the spec.
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides `output` from the spec.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 3 if any bipartization run did not terminate.
    #[arg(long)]
    strict: bool,
}

/// Error plus the exit status it maps to.
struct Failure(u8, String);

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

impl From<wrig::Error> for Failure {
    fn from(e: wrig::Error) -> Self {
        let code = match e {
            wrig::Error::NotTerminated => exit::RUNTIME,
            _ => exit::INVALID_INPUT,
        };
        Failure(code, e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure(exit::INVALID_INPUT, format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn read_matrix(path: &Path) -> Result<RepresentationMatrix, Failure> {
    Ok(parse_matrix(&read_input(path)?)?)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure(exit::RUNTIME, e.to_string()))
}

fn sample(a: SampleArgs) -> Result<u8, Failure> {
    let params = match (a.m, a.alpha, a.c) {
        (Some(m), _, _) => ModelParams::new(a.n, m, a.p.expect("required by clap"))?,
        (_, Some(alpha), _) => ModelParams::with_alpha(a.n, alpha, a.p.expect("required by clap"))?,
        (_, _, Some(c)) => ModelParams::with_c(a.n, c)?,
        _ => unreachable!("clap requires one of m, alpha, c"),
    };
    if !params.in_studied_range() {
        eprintln!(
            "warning: p = {} lies outside [1/sqrt(nm), 1/sqrt(m)]",
            params.p()
        );
    }
    let r = sample_matrix(&params, Seed(a.seed));
    write_output(a.out.as_deref(), &write_matrix(&r))?;
    Ok(exit::OK)
}

fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let r = read_matrix(&a.input)?;
    let seed = Seed(a.seed);
    let (name, x): (&str, Coloring) = match a.algo {
        Algo::Random => ("random", random_cut(&r, seed).coloring),
        Algo::Majority => {
            let cfg = MajorityConfig::new(a.epsilon)?;
            ("majority", majority_cut(&r, &cfg, seed).coloring)
        }
        Algo::Exact => ("exact", brute_force_max_cut(&r)?.coloring),
        Algo::Mindisc => ("mindisc", brute_force_min_discrepancy(&r)?.0),
    };
    let weight = r.cut_weight(&x)?;
    let disc = r.discrepancy(&x)?;
    if let Some(path) = &a.coloring_out {
        write_output(Some(path), &write_coloring(&x))?;
    }
    let text = if a.json {
        json!({
            "algorithm": name,
            "weight": weight,
            "discrepancy": disc,
            "n": r.n(),
            "m": r.m(),
            "seed": a.seed,
        })
        .to_string()
    } else {
        format!("algorithm {name}\nweight {weight}\ndiscrepancy {disc}")
    };
    println!("{text}");
    Ok(exit::OK)
}

fn bipartize(a: BipartizeArgs) -> Result<u8, Failure> {
    let r = read_matrix(&a.input)?;
    let budget = a.max_rematch.unwrap_or_else(|| default_max_rematch(r.n()));
    let outcome = weak_bipartization(&r, Seed(a.seed), budget);
    let coloring = extract_coloring(&outcome).ok();
    let (weight, disc) = match &coloring {
        Some(x) => (Some(r.cut_weight(x)?), Some(r.discrepancy(x)?)),
        None => (None, None),
    };
    if let (Some(path), Some(x)) = (&a.coloring_out, &coloring) {
        write_output(Some(path), &write_coloring(x))?;
    }
    if a.json {
        let doc = json!({
            "terminated": outcome.terminated,
            "iterations": outcome.iterations,
            "zero_strong_cycles": outcome.zero_strong_cycles.len(),
            "label_disjoint": outcome.label_disjoint,
            "cut_weight": weight,
            "discrepancy": disc,
        });
        println!("{doc}");
    } else {
        println!("terminated {}", outcome.terminated);
        println!("iterations {}", outcome.iterations);
        println!("zero_strong_cycles {}", outcome.zero_strong_cycles.len());
        println!("label_disjoint {}", outcome.label_disjoint);
        if let (Some(w), Some(d)) = (weight, disc) {
            println!("cut_weight {w}\ndiscrepancy {d}");
        }
    }
    if !outcome.terminated && a.strict {
        return Ok(exit::NOT_TERMINATED);
    }
    Ok(exit::OK)
}

fn count_sequences(a: CountArgs) -> Result<u8, Failure> {
    if a.expect {
        let (n, m, p) = (a.n.unwrap(), a.m.unwrap(), a.p.unwrap());
        println!("{}", expected_sequence_count(n, m, p, a.k)?);
    } else {
        let r = read_matrix(a.input.as_deref().expect("required by clap"))?;
        println!("{}", count_sequences_exact(&r, a.k)?);
    }
    Ok(exit::OK)
}

fn experiment(a: ExperimentArgs) -> Result<u8, Failure> {
    let mut spec = ExperimentSpec::from_path(&a.spec)?;
    if let Some(w) = a.workers {
        spec.workers = w;
    }
    if let Some(out) = a.out {
        spec.output = Some(out);
        spec.summary = None;
    }
    for point in spec.grid()? {
        if !point.params.in_studied_range() {
            eprintln!(
                "warning: point {} (n = {}, m = {}, p = {}) lies outside the studied range",
                point.id,
                point.params.n(),
                point.params.m(),
                point.params.p()
            );
        }
    }
    let summary = run_to_files(&spec)?;
    for p in &summary.points {
        let means: Vec<String> = p
            .weight
            .iter()
            .map(|(a, s)| format!("{a}={:.3}", s.mean))
            .collect();
        println!(
            "point {} n={} m={} p={} {}",
            p.point,
            p.n,
            p.m,
            p.p,
            means.join(" ")
        );
    }
    let stuck = summary.non_terminated();
    if stuck > 0 {
        eprintln!("{stuck} bipartization run(s) did not terminate");
        if a.strict {
            return Ok(exit::NOT_TERMINATED);
        }
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::INVALID_INPUT
            } else {
                exit::OK
            });
        }
    };
    let res = match cli.command {
        Command::Sample(a) => sample(a),
        Command::Solve(a) => solve(a),
        Command::Bipartize(a) => bipartize(a),
        Command::CountSequences(a) => count_sequences(a),
        Command::Experiment(a) => experiment(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
