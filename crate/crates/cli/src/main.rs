//! `predep` command-line tool.
//!
//! Exit status: 0 on success, 1 for bad input, 2 when every requested pair
//! was degenerate.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use predep::bench::{run_bench, run_copula_bench, write_bench_csv, BenchSpec, CopulaSpec};
use predep::report::{emit_report, ReportFormat};
use predep::synth::{clayton_sample, draw_model, gaussian_pair_sample, generate};
use predep::table::write_columns;
use predep::{
    load_csv, pairwise_sweep, predep as estimate, predep_both, Error, Gaussian, LoadOptions, Measure, ModelKind,
    PredepConfig, PredepResult, RelationshipModel, RngSeed, Sample, SweepConfig, Table,
};

#[derive(Parser)]
#[command(name = "predep", version, about = "Predictive dependence between continuous variables")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dependence of one column on another.
    Compute(ComputeArgs),
    /// All ordered column pairs of a table.
    Matrix(MatrixArgs),
    /// Write a synthetic dataset.
    Synth(SynthArgs),
    /// Noise or copula sweep in long format.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Extra cell values to treat as missing (repeatable).
    #[arg(long = "na", value_name = "TOKEN")]
    na: Vec<String>,
    /// Treat any non-numeric cell as missing instead of failing.
    #[arg(long)]
    lenient: bool,
}

impl InputArgs {
    fn load(&self) -> Result<Table, Error> {
        let mut options = LoadOptions {
            strict: !self.lenient,
            ..LoadOptions::default()
        };
        options.missing_tokens.extend(self.na.iter().cloned());
        load_csv(&self.input, &options)
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Conditioning column.
    #[arg(long)]
    x: String,
    /// Predicted column.
    #[arg(long)]
    y: String,
    /// Also report x given y.
    #[arg(long)]
    both: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bootstrap resamples for the confidence interval (0 disables it).
    #[arg(long, default_value_t = 200)]
    ci: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 50)]
    min_overlap: usize,
    #[arg(long, default_value = "predep,pearson,spearman,dcor")]
    measures: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    ci: usize,
    /// csv or json; defaults to the extension of --out.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Model family, or `clayton` / `gaussian` (parameter from --theta).
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Clayton parameter, or the correlation for `gaussian`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Fixed coefficients instead of drawn ones, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    coefficients: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated model names, or `table` for the nine standard families.
    #[arg(long, default_value = "table")]
    models: String,
    #[arg(long, default_value_t = 20)]
    noise_levels: usize,
    #[arg(long, default_value_t = 0.9)]
    max_noise: f64,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value = "predep,pearson,spearman,dcor")]
    measures: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sweep the Clayton copula parameter instead of noise.
    #[arg(long)]
    copula: bool,
    #[arg(long, default_value = "-0.9,-0.5,0.5,2,8", allow_hyphen_values = true)]
    thetas: String,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Input(String),
    Degenerate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_degeneracy() {
            Failure::Degenerate(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Degenerate(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(input("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| input(e.to_string()))?;
    }
    match cli.command {
        Command::Compute(args) => compute(args),
        Command::Matrix(args) => matrix(args),
        Command::Synth(args) => synth(args),
        Command::Bench(args) => bench(args),
    }
}

fn compute(args: ComputeArgs) -> Result<(), Failure> {
    let table = args.input.load()?;
    let column = |name: &str| {
        table
            .column_index(name)
            .ok_or_else(|| input(format!("no column '{name}' in {}", args.input.input.display())))
    };
    let (a, b) = (column(&args.x)?, column(&args.y)?);
    let (x, y) = table.complete_pairs(a, b);
    let config = PredepConfig {
        ci_resamples: args.ci,
        ..PredepConfig::with_seed(args.seed)
    };
    let results = if args.both {
        let (f, r) = predep_both(&x, &y, &config)?;
        vec![f, r]
    } else {
        vec![estimate(&x, &y, &config)?]
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let write_err = |e: io::Error| input(e.to_string());
    if args.json {
        let value = if args.both {
            serde_json::to_value(&results)
        } else {
            serde_json::to_value(&results[0])
        }
        .map_err(|e| input(e.to_string()))?;
        writeln!(out, "{}", serde_json::to_string_pretty(&value).map_err(|e| input(e.to_string()))?).map_err(write_err)?;
    } else {
        writeln!(out, "rows used: {}", x.len()).map_err(write_err)?;
        for r in &results {
            let (given, target) = match r.direction {
                predep::Direction::YGivenX => (&args.x, &args.y),
                predep::Direction::XGivenY => (&args.y, &args.x),
            };
            write_result(&mut out, target, given, r).map_err(write_err)?;
        }
    }
    Ok(())
}

fn write_result(out: &mut impl Write, target: &str, given: &str, r: &PredepResult<f64>) -> io::Result<()> {
    writeln!(out, "{target} given {given}:")?;
    writeln!(out, "  alpha          {:.6}", r.alpha)?;
    writeln!(out, "  alpha (raw)    {:.6}", r.alpha_raw)?;
    writeln!(out, "  S marginal     {:.6}", r.s_marginal)?;
    writeln!(out, "  S conditional  {:.6}", r.s_conditional)?;
    writeln!(out, "  bins           {} ({} degenerate)", r.bins, r.degenerate_bins)?;
    if let Some((lo, hi)) = r.ci {
        writeln!(out, "  interval       [{lo:.6}, {hi:.6}]")?;
    }
    Ok(())
}

fn matrix(args: MatrixArgs) -> Result<(), Failure> {
    let format = match &args.format {
        Some(f) => f.parse()?,
        None => ReportFormat::from_path(&args.out),
    };
    let config = SweepConfig {
        min_overlap: args.min_overlap,
        measures: Measure::parse_list(&args.measures)?,
        predep: PredepConfig {
            ci_resamples: args.ci,
            ..PredepConfig::with_seed(args.seed)
        },
    };
    let table = args.input.load()?;
    let outcome = pairwise_sweep(&table, &config)?;
    emit_report(&outcome.reports, format, &args.out)?;
    for s in &outcome.skipped {
        eprintln!("skipped {} -> {} (overlap {}): {}", s.column_a, s.column_b, s.overlap_n, s.reason);
    }
    eprintln!(
        "{} of {} ordered pairs written to {}",
        outcome.reports.len(),
        outcome.pair_count(),
        args.out.display()
    );
    if outcome.reports.is_empty() && outcome.pair_count() > 0 {
        return Err(Failure::Degenerate("no pair could be computed".into()));
    }
    Ok(())
}

fn parse_numbers(list: &str, what: &str) -> Result<Vec<f64>, Failure> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| input(format!("bad {what} value '{s}'"))))
        .collect()
}

fn synth(args: SynthArgs) -> Result<(), Failure> {
    let seed = RngSeed(args.seed);
    let name = args.model.trim().to_ascii_lowercase();
    let sample: Sample = match name.as_str() {
        "clayton" => {
            let theta = args.theta.ok_or_else(|| input("the clayton model needs --theta"))?;
            clayton_sample(theta, args.n, seed)?
        }
        "gaussian" => {
            let rho = args.theta.ok_or_else(|| input("the gaussian model needs --theta (correlation)"))?;
            gaussian_pair_sample(&Gaussian::standard(rho)?, args.n, seed)?
        }
        _ => {
            let kind: ModelKind = name.parse().map_err(|e: Error| {
                input(format!("{e}, clayton, gaussian"))
            })?;
            let model = match (&args.coefficients, kind.is_functional()) {
                (Some(list), _) => RelationshipModel::new(kind, parse_numbers(list, "coefficient")?)?,
                (None, true) => draw_model(kind, seed.child(0))?,
                (None, false) => RelationshipModel::shape(kind)?,
            };
            generate(&model, args.n, args.delta, seed.child(1))?
        }
    };
    let mut names = vec!["x", "y"];
    let mut columns: Vec<&[f64]> = vec![&sample.x, &sample.y];
    if let Some(clean) = &sample.y_clean {
        names.push("y_clean");
        columns.push(clean);
    }
    write_to(&args.out, |w| write_columns(w, &names, &columns))
}

fn write_to(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<(), Error>) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    f(&mut w)?;
    w.flush().map_err(|e| input(format!("{}: {e}", path.display())))
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let measures = Measure::parse_list(&args.measures)?;
    let predep_config = PredepConfig::with_seed(args.seed).without_ci();
    if args.copula {
        let spec = CopulaSpec {
            thetas: parse_numbers(&args.thetas, "theta")?,
            n: args.n,
            seeds: args.seeds,
            seed: RngSeed(args.seed),
            measures,
            predep: predep_config,
        };
        let rows = run_copula_bench(&spec)?;
        return write_to(&args.out, |w| write_bench_csv(&rows, "theta", w));
    }
    let models = if args.models.trim().eq_ignore_ascii_case("table") {
        ModelKind::TABLE.to_vec()
    } else if args.models.trim().eq_ignore_ascii_case("all") {
        ModelKind::ALL.to_vec()
    } else {
        args.models
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<ModelKind>, Error>>()?
    };
    let spec = BenchSpec {
        models,
        n: args.n,
        noise_levels: args.noise_levels,
        max_noise: args.max_noise,
        seeds: args.seeds,
        seed: RngSeed(args.seed),
        measures,
        predep: predep_config,
        ..BenchSpec::default()
    };
    let rows = run_bench(&spec)?;
    write_to(&args.out, |w| write_bench_csv(&rows, "noise_level", w))
}
