//! Command-line front end for the experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use siftshadow::experiments::{
    compare_files, configure_threads, parse_config_file, run, Command, CompareTolerances, Format,
    Params, RunConfig, RunError, SampleSource,
};

#[derive(Parser)]
#[command(name = "siftshadow", version, about = "Pliss sifting, shadowing and periodic repellers")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hyperbolic times of an explicit string or of an orbit.
    Sift(Flags),
    /// Shadow a finite (optionally perturbed) orbit segment.
    Shadow(Flags),
    /// Close an orbit segment into a periodic orbit.
    Close(Flags),
    /// Search for periodic repellers near a seed orbit.
    Repellers(Flags),
    /// Check the abnormal inequalities at a periodic point.
    VerifyAbnormal(Flags),
    /// Fit uniform-expansion constants `(C, λ)` on a sample.
    ExpansionFit(Flags),
    /// Averages of log co-norm at doubling time scales.
    Kingman(Flags),
    /// Run the command named by `command = …` in a config file.
    Run(Flags),
    /// Diff two reports field by field.
    Compare(CompareArgs),
}

#[derive(Args, Default)]
struct Flags {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    map: Option<String>,
    /// `κ` (run on `f^κ`) or `auto`.
    #[arg(long)]
    power: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long)]
    word: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
    #[arg(long = "H")]
    h: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    gamma_prime: Option<f64>,
    #[arg(long)]
    gamma_double_prime: Option<f64>,
    /// `γ,γ′,γ″` in one flag.
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    start: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    tau_min: Option<usize>,
    #[arg(long)]
    max_repellers: Option<usize>,
    #[arg(long)]
    t1: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// `halton`, `orbit` or `repellers`.
    #[arg(long)]
    sample: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// `json` (default) or `csv`.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    /// Default absolute tolerance for float fields.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Per-field tolerance, `field=tol`; repeatable.
    #[arg(long = "field-tol")]
    field_tol: Vec<String>,
}

fn enum_value<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, RunError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| RunError::Config(format!("unknown {what} `{s}`")))
}

impl Flags {
    fn params(&self) -> Result<Params, RunError> {
        let (mut gamma, mut gamma_prime, mut gamma_double_prime) =
            (self.gamma, self.gamma_prime, self.gamma_double_prime);
        if let Some(g) = &self.gammas {
            let [a, b, c] = g[..] else {
                return Err(RunError::Config("--gammas takes three comma-separated values".into()));
            };
            gamma = gamma.or(Some(a));
            gamma_prime = gamma_prime.or(Some(b));
            gamma_double_prime = gamma_double_prime.or(Some(c));
        }
        Ok(Params {
            map: self.map.clone(),
            power: self.power.clone(),
            x: self.x,
            word: self.word.clone(),
            values: self.values.clone(),
            h: self.h,
            gamma,
            gamma_prime,
            gamma_double_prime,
            lambda: self.lambda,
            epsilon: self.epsilon,
            noise: self.noise,
            horizon: self.horizon,
            start: self.start,
            tau: self.tau,
            tau_min: self.tau_min,
            max_repellers: self.max_repellers,
            t1: self.t1,
            levels: self.levels,
            blocks: self.blocks,
            k_max: self.k_max,
            samples: self.samples,
            sample: self.sample.as_deref().map(|s| enum_value::<SampleSource>(s, "sample source")).transpose()?,
            seed: self.seed,
            output: self.output.clone(),
            format: self.format.as_deref().map(|s| enum_value::<Format>(s, "format")).transpose()?,
        })
    }
}

fn execute(command: Option<Command>, flags: &Flags) -> Result<(), RunError> {
    let (file_command, file_params) = match &flags.config {
        Some(path) => parse_config_file(path)?,
        None => (None, Params::default()),
    };
    let command = match (command, file_command) {
        (Some(c), Some(f)) if c != f => {
            return Err(RunError::Config(format!(
                "config file is for `{}` but `{}` was requested",
                f.as_str(),
                c.as_str()
            )))
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(RunError::Config("`run` needs a config file with a `command` key".into())),
    };
    let params = flags.params()?.or(file_params);
    let cfg = RunConfig::new(command, params)?;
    let out = run(&cfg)?;
    let output = cfg.params.output.as_deref();
    out.emit(cfg.params.format.unwrap_or_default(), output)?;
    if output.is_some() {
        println!("{}", out.summary);
    } else {
        eprintln!("{}", out.summary);
    }
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<ExitCode, RunError> {
    let mut tol = CompareTolerances {
        default: args.tol,
        ..CompareTolerances::default()
    };
    for spec in &args.field_tol {
        let parsed = spec
            .split_once('=')
            .and_then(|(k, v)| v.trim().parse::<f64>().ok().map(|v| (k.trim().to_string(), v)));
        let Some((k, v)) = parsed else {
            return Err(RunError::Config(format!("--field-tol expects field=tol, got `{spec}`")));
        };
        tol.fields.insert(k, v);
    }
    let diffs = compare_files(&args.a, &args.b, &tol)?;
    for d in &diffs {
        println!("{d}");
    }
    if diffs.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} field(s) differ", diffs.len());
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Cmd::Sift(f) => execute(Some(Command::Sift), f).map(|()| ExitCode::SUCCESS),
        Cmd::Shadow(f) => execute(Some(Command::Shadow), f).map(|()| ExitCode::SUCCESS),
        Cmd::Close(f) => execute(Some(Command::Close), f).map(|()| ExitCode::SUCCESS),
        Cmd::Repellers(f) => execute(Some(Command::Repellers), f).map(|()| ExitCode::SUCCESS),
        Cmd::VerifyAbnormal(f) => execute(Some(Command::VerifyAbnormal), f).map(|()| ExitCode::SUCCESS),
        Cmd::ExpansionFit(f) => execute(Some(Command::ExpansionFit), f).map(|()| ExitCode::SUCCESS),
        Cmd::Kingman(f) => execute(Some(Command::Kingman), f).map(|()| ExitCode::SUCCESS),
        Cmd::Run(f) => execute(None, f).map(|()| ExitCode::SUCCESS),
        Cmd::Compare(args) => compare(args),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
