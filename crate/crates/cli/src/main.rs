//! `gqd3`: CSV sweep tables, state-file correlation reports and
//! self-verification for the three-qubit correlation library.
//!
//! Exit codes: 0 success, 1 verification failure (or internal inconsistency),
//! 2 configuration/input error, 3 I/O error.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gqd3_core::experiments::{
    run_case1, run_case2, run_case3, run_discord_file, run_pt, run_verify, SweepConfig,
    VerifyConfig,
};
use gqd3_core::{Error, Result, StateFamily};

#[derive(Parser)]
#[command(
    name = "gqd3",
    version,
    about = "Geometric discord and total quantum correlation of three qubits \
             in independent lossy reservoirs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correlation decay over time for each reservoir width (CSV)
    Case1(SweepArgs),
    /// Correlation over time and initial superposition weight (CSV)
    Case2(SweepArgs),
    /// Correlation over time and mixing weight r (CSV)
    Case3(SweepArgs),
    /// Excited-state survival probability curves (CSV)
    Pt(SweepArgs),
    /// Correlation report for a density matrix read from a text file
    Discord(DiscordArgs),
    /// Cross-check all computational routes against independent oracles
    Verify(VerifyArgs),
}

/// Flags shared by the sweep subcommands. Every flag overrides the matching
/// snake_case key of the optional `--config` file, which in turn overrides
/// the built-in defaults of the chosen subcommand.
#[derive(Args)]
struct SweepArgs {
    /// Initial-state family: ghz or w
    #[arg(long)]
    state: Option<String>,
    /// Weight of the first basis component, in [0, 1]
    #[arg(long)]
    alpha_sq: Option<f64>,
    /// Mixing weight toward white noise, in [0, 1] (1 = pure)
    #[arg(long)]
    r: Option<f64>,
    /// Relative phase of the second superposition component (radians)
    #[arg(long)]
    delta: Option<f64>,
    /// Relative phase of the third superposition component (radians)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Comma-separated reservoir width ratios lambda/gamma0
    #[arg(long, value_name = "FLOATS")]
    lambda_ratios: Option<String>,
    /// Largest gamma0*t on the time grid
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of time-grid points (>= 2)
    #[arg(long)]
    steps: Option<usize>,
    /// Write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed recorded with the run (sweeps themselves sample nothing)
    #[arg(long)]
    seed: Option<u64>,
    /// Plain-text key=value defaults; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DiscordArgs {
    /// Density-matrix text file: 8 lines of 8 complex entries `a+bi`
    file: PathBuf,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// RNG seed shared by all sampling suites
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Random (state, survival) pairs for the channel cross-check
    #[arg(long, default_value_t = 500)]
    dynamics_samples: usize,
    /// Random states for the brute-force discord cross-check
    #[arg(long, default_value_t = 200)]
    discord_samples: usize,
    /// Random states for the round-trip and purity checks
    #[arg(long, default_value_t = 1000)]
    roundtrip_samples: usize,
    /// Random states for the post-measurement classicality check
    #[arg(long, default_value_t = 100)]
    classicality_samples: usize,
    /// Step size of the integro-differential marcher
    #[arg(long, default_value_t = 1e-4)]
    volterra_dt: f64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy)]
enum SweepKind {
    Case1,
    Case2,
    Case3,
    Pt,
}

const CONFIG_KEYS: [&str; 10] = [
    "state",
    "alpha_sq",
    "r",
    "delta",
    "epsilon",
    "lambda_ratios",
    "t_max",
    "steps",
    "out",
    "seed",
];

fn parse_config_file(path: &PathBuf) -> Result<HashMap<String, String>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "{} line {}: expected key=value, got '{line}'",
                path.display(),
                idx + 1
            ))
        })?;
        let key = k.trim().to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "{} line {}: unknown key '{key}'",
                path.display(),
                idx + 1
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn config_parse<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Config(format!("key {key}: cannot parse '{s}'")))
}

/// Flag value if given, else the config-file value, else `None`.
fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    file: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key).map(|s| config_parse(key, s)).transpose()
}

fn parse_ratio_list(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| config_parse(key, tok.trim()))
        .collect()
}

impl SweepArgs {
    fn resolve(&self, kind: SweepKind) -> Result<SweepConfig> {
        let file = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let family = match (&self.state, file.get("state")) {
            (Some(s), _) | (None, Some(s)) => s.parse()?,
            (None, None) => StateFamily::Ghz,
        };
        let mut cfg = match kind {
            SweepKind::Case1 | SweepKind::Pt => SweepConfig::case1_defaults(family),
            SweepKind::Case2 => SweepConfig::case2_defaults(family),
            SweepKind::Case3 => SweepConfig::case3_defaults(family),
        };
        if let Some(v) = pick(self.alpha_sq, &file, "alpha_sq")? {
            cfg.alpha_sq = v;
        }
        if let Some(v) = pick(self.r, &file, "r")? {
            cfg.r = v;
        }
        if let Some(v) = pick(self.delta, &file, "delta")? {
            cfg.delta = v;
        }
        if let Some(v) = pick(self.epsilon, &file, "epsilon")? {
            cfg.epsilon = v;
        }
        if let Some(s) = pick(self.lambda_ratios.clone(), &file, "lambda_ratios")? {
            cfg.lambda_ratios = parse_ratio_list("lambda_ratios", &s)?;
        }
        if let Some(v) = pick(self.t_max, &file, "t_max")? {
            cfg.t_max = v;
        }
        if let Some(v) = pick(self.steps, &file, "steps")? {
            cfg.n_t = v;
        }
        if let Some(v) = pick(self.seed, &file, "seed")? {
            cfg.seed = v;
        }
        cfg.out = match &self.out {
            Some(p) => Some(p.clone()),
            None => file.get("out").map(PathBuf::from),
        };
        Ok(cfg)
    }
}

impl VerifyArgs {
    fn to_config(&self) -> VerifyConfig {
        VerifyConfig {
            seed: self.seed,
            dynamics_samples: self.dynamics_samples,
            discord_samples: self.discord_samples,
            roundtrip_samples: self.roundtrip_samples,
            classicality_samples: self.classicality_samples,
            volterra_dt: self.volterra_dt,
            ..VerifyConfig::default()
        }
    }
}

fn write_out(path: &Option<PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::io(p.display().to_string(), e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit_sweep(args: &SweepArgs, kind: SweepKind) -> Result<ExitCode> {
    let cfg = args.resolve(kind)?;
    let table = match kind {
        SweepKind::Case1 => run_case1(&cfg)?,
        SweepKind::Case2 => run_case2(&cfg)?,
        SweepKind::Case3 => run_case3(&cfg)?,
        SweepKind::Pt => run_pt(&cfg)?,
    };
    write_out(&cfg.out, &table)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Case1(args) => emit_sweep(&args, SweepKind::Case1),
        Command::Case2(args) => emit_sweep(&args, SweepKind::Case2),
        Command::Case3(args) => emit_sweep(&args, SweepKind::Case3),
        Command::Pt(args) => emit_sweep(&args, SweepKind::Pt),
        Command::Discord(args) => {
            let report = run_discord_file(&args.file)?;
            write_out(&args.out, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let report = run_verify(&args.to_config())?;
            write_out(&args.out, &report.write_text())?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn failure_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 3,
        Error::InternalConsistency(_) | Error::CorruptedState(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(failure_code(&e))
        }
    }
}
