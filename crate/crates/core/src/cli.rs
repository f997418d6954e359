//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input or data error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::calibration::{calibrate_on, BetaGrid, HUMAN_REFERENCE_ACCURACY};
use crate::error::{Error, Result};
use crate::evaluation::{build_suite, evaluate_suite, run_survey_fixture, EvalConfig};
use crate::generate::{generate, NoiseMode, NoiseSpec};
use crate::hypothesis::{Hypothesis, SpaceConfig, DEFAULT_N_MAX};
use crate::inference::{predict_next, LikelihoodParams};
use crate::sequence::Sequence;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Default generation-side noise standard deviation, `sqrt(0.66)`.
const DEFAULT_NOISE_SIGMA: f64 = 0.812_403_840_463_596;

#[derive(Debug, Parser)]
#[command(
    name = "seqbayes",
    version,
    about = "Bayesian next-term prediction for increasing integer sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Posterior over rules for a sequence, with next-term predictions.
    Infer(InferArgs),
    /// Generate a sequence from a rule.
    Generate(GenerateArgs),
    /// Accuracy per sequence class on a generated suite.
    Evaluate(EvaluateArgs),
    /// Sweep beta and pick the value whose accuracy matches a target.
    Calibrate(CalibrateArgs),
    /// Answer the six built-in multiple-choice questions.
    Survey(SurveyArgs),
}

#[derive(Debug, Args)]
pub struct InferArgs {
    /// Comma-separated, strictly increasing positive integers.
    #[arg(long)]
    pub sequence: String,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Noise variance assumed by the likelihood.
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Rule label: A<t>, M<s> or M<s>+A<t>.
    #[arg(long)]
    pub hypothesis: String,
    #[arg(long, default_value_t = 1)]
    pub start: u64,
    #[arg(long, default_value_t = 6)]
    pub length: usize,
    #[arg(long, default_value = "none")]
    pub noise: String,
    /// Standard deviation of the Gaussian noise draw.
    #[arg(long, default_value_t = DEFAULT_NOISE_SIGMA)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub n_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// JSON suite configuration; built-in defaults when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Overrides the config's master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Accuracy to match; defaults to the averaged human accuracy.
    #[arg(long, default_value_t = HUMAN_REFERENCE_ACCURACY)]
    pub target: f64,
    /// Log-spaced grid `lo:hi:n`.
    #[arg(long, default_value = "1e-6:1:25")]
    pub grid: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON result here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV dump of the curve (`beta,accuracy`).
    #[arg(long, default_value = "calibration_curve.csv")]
    pub curve: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Infer(a) => infer(a, out),
        Command::Generate(a) => generate_cmd(a, out),
        Command::Evaluate(a) => evaluate_cmd(a, out),
        Command::Calibrate(a) => calibrate_cmd(a, out),
        Command::Survey(a) => survey(a, out),
    }
}

fn stdout_err(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn print_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    writeln!(out, "{text}").map_err(stdout_err)
}

/// Writes via a temp file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<EvalConfig> {
    let mut config = match path {
        Some(p) => EvalConfig::from_json_file(p)?,
        None => EvalConfig::default(),
    };
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    Ok(config)
}

fn infer(a: InferArgs, out: &mut dyn Write) -> Result<()> {
    let seq: Sequence = a.sequence.parse()?;
    let space = SpaceConfig::with_n_max(a.n_max)?;
    let params = LikelihoodParams::with_sigma2(a.sigma2);
    let p = predict_next(&seq, &space, a.beta, &params)?;
    let table = p.table.truncated(a.top);
    match a.format {
        Format::Json => print_json(&table, out),
        Format::Table => {
            let mut s = format!(
                "# sequence={seq} beta={} sigma2={} top={} n_max={} hypotheses={}\n",
                a.beta,
                a.sigma2,
                a.top,
                a.n_max,
                space.len()
            );
            s.push_str(&format!(
                "{:<8} {:>24} {:>14} {:>10}\n",
                "rule", "probability", "log_score", "prediction"
            ));
            for e in &table.entries {
                s.push_str(&format!(
                    "{:<8} {:>24} {:>14.6} {:>10}\n",
                    e.hypothesis.to_string(),
                    e.probability,
                    e.log_score,
                    e.prediction
                ));
            }
            s.push_str(&format!("MAP {} -> next {}\n", p.hypothesis, p.next));
            out.write_all(s.as_bytes()).map_err(stdout_err)
        }
    }
}

fn generate_cmd(a: GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let h: Hypothesis = a.hypothesis.parse()?;
    let mode: NoiseMode = a.noise.parse()?;
    let noise = NoiseSpec::new(mode, a.sigma, a.seed)?;
    let sample = generate(&h, a.start, a.length, &noise, a.n_max)?;
    match a.format {
        Format::Json => print_json(&sample, out),
        Format::Table => {
            let s = format!(
                "# hypothesis={h} start={} length={} noise={mode} sigma={} seed={} n_max={}\n{}\n",
                a.start,
                a.length,
                a.sigma,
                a.seed,
                a.n_max,
                sample.to_csv()
            );
            out.write_all(s.as_bytes()).map_err(stdout_err)
        }
    }
}

fn evaluate_cmd(a: EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let config = load_config(a.config.as_deref(), a.seed)?;
    let params = LikelihoodParams::with_sigma2(a.sigma2);
    let suite = build_suite(&config)?;
    let report = evaluate_suite(&suite, a.beta, &params)?;
    if let Some(path) = &a.output {
        let json = serde_json::to_string_pretty(&report).expect("serializable");
        write_atomic(path, json.as_bytes())?;
    }
    match a.format {
        Format::Json => print_json(&report, out),
        Format::Table => out.write_all(report.to_table().as_bytes()).map_err(stdout_err),
    }
}

fn calibrate_cmd(a: CalibrateArgs, out: &mut dyn Write) -> Result<()> {
    let grid: BetaGrid = a.grid.parse()?;
    let config = load_config(a.config.as_deref(), a.seed)?;
    let params = LikelihoodParams::with_sigma2(a.sigma2);
    let suite = build_suite(&config)?;
    let result = calibrate_on(a.target, &grid, &suite, &params)?;

    write_atomic(&a.curve, result.curve_csv().as_bytes())?;
    if let Some(path) = &a.output {
        let json = serde_json::to_string_pretty(&result).expect("serializable");
        write_atomic(path, json.as_bytes())?;
    }
    match a.format {
        Format::Json => print_json(&result, out),
        Format::Table => {
            let c = &config;
            let mut s = format!(
                "# target={} grid={} sigma2={} per_class_count={} shown_length={} x1_range={}..{} sigma2_noise={} n_max={} master_seed={}\n",
                a.target, a.grid, a.sigma2, c.per_class_count, c.shown_length, c.x1_range[0], c.x1_range[1],
                c.sigma2_noise, c.n_max, c.master_seed
            );
            s.push_str(&format!("{:>14} {:>13}\n", "beta", "accuracy (%)"));
            for p in &result.curve {
                s.push_str(&format!("{:>14.6e} {:>13.2}\n", p.beta, p.accuracy * 100.0));
            }
            s.push_str(&format!(
                "beta_eff={} achieved={:.5} target={}\ncurve written to {}\n",
                result.beta_eff,
                result.achieved,
                result.target,
                a.curve.display()
            ));
            out.write_all(s.as_bytes()).map_err(stdout_err)
        }
    }
}

fn survey(a: SurveyArgs, out: &mut dyn Write) -> Result<()> {
    let outcome = run_survey_fixture(a.beta, &LikelihoodParams::with_sigma2(a.sigma2))?;
    match a.format {
        Format::Json => print_json(&outcome, out),
        Format::Table => out.write_all(outcome.to_table().as_bytes()).map_err(stdout_err),
    }
}
