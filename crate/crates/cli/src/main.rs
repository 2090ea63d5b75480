//! `intervalmce`: simulate, fit and analyze interval data under the Normal
//! hierarchical model.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use intervalmce::io::{file_sha256, read_intervals, write_intervals};
use intervalmce::{
    analysis_from_fit, fit, hitting_approx, hitting_conditional, hitting_exact, run_table1,
    simulate, ContrastConfig, Interval, Table1Settings, ThetaParams,
};

#[derive(Parser)]
#[command(name = "intervalmce", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from the model and write it as `lower,upper` CSV.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        theta: ThetaArgs,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the model to a CSV sample and write a JSON report.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the simulation replication study.
    Table1 {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Replications per sample size.
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', default_value = "100,200,300,400,500")]
        sizes: Vec<usize>,
        /// JSON report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV table path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Fit, summarize and write density-comparison curves.
    Analyze {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for report.json, center_density.csv and length_density.csv.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print T([a, b]) from the exact, approximate and conditional formulas.
    Hitting {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        theta: ThetaArgs,
        #[arg(long, default_value_t = 1e-8)]
        neglect_threshold: f64,
    },
}

/// Model parameters; defaults are the simulation design point.
#[derive(Args, Clone, Copy)]
struct ThetaArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    a0: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 10.0)]
    s11: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    s12: f64,
    #[arg(long, default_value_t = 10.0)]
    s22: f64,
}

impl ThetaArgs {
    fn theta(&self) -> Result<ThetaParams> {
        Ok(ThetaParams::new(
            self.a0, self.mu, self.s11, self.s12, self.s22,
        )?)
    }
}

#[derive(Serialize)]
struct InputInfo {
    sha256: String,
    n: usize,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'static str,
    version: &'static str,
    config: &'a ContrastConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputInfo>,
    result: T,
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn load_config(path: Option<&Path>) -> Result<ContrastConfig> {
    match path {
        Some(p) => {
            ContrastConfig::load(p).with_context(|| format!("loading config {}", p.display()))
        }
        None => Ok(ContrastConfig::default()),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_simulate(n: u64, seed: u64, theta: ThetaArgs, out: Option<&Path>) -> Result<()> {
    let theta = theta.theta()?;
    let sample = simulate(&theta, n as usize, seed)?;
    let mut buf = Vec::new();
    writeln!(
        buf,
        "# intervalmce {VERSION} simulate n={n} seed={seed} a0={} mu={} s11={} s12={} s22={}",
        theta.a0, theta.mu, theta.s11, theta.s12, theta.s22
    )?;
    write_intervals(&sample, &mut buf)?;
    emit(out, std::str::from_utf8(&buf)?)
}

fn load_data(path: &Path) -> Result<(intervalmce::IntervalSample, InputInfo)> {
    let sample = read_intervals(path)?;
    let info = InputInfo {
        sha256: file_sha256(path)?,
        n: sample.len(),
    };
    Ok((sample, info))
}

fn cmd_fit(data: &Path, config: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let cfg = load_config(config)?;
    let (sample, input) = load_data(data)?;
    let result = fit(&sample, &cfg)?;
    let report = Report {
        command: "fit",
        version: VERSION,
        config: &cfg,
        input: Some(input),
        result,
    };
    emit(out, &to_json(&report)?)
}

fn cmd_table1(
    config: Option<&Path>,
    reps: usize,
    sizes: Vec<usize>,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> Result<()> {
    let cfg = load_config(config)?;
    let settings = Table1Settings {
        sizes,
        reps,
        ..Default::default()
    };
    let table = run_table1(&cfg, &settings)?;
    if let Some(p) = csv {
        fs::write(p, table.to_csv()).with_context(|| format!("writing {}", p.display()))?;
    }
    let report = Report {
        command: "table1",
        version: VERSION,
        config: &cfg,
        input: None,
        result: &table,
    };
    emit(out, &to_json(&report)?)
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    #[serde(flatten)]
    report: &'a intervalmce::AnalysisReport,
    center_density_csv: &'static str,
    length_density_csv: &'static str,
}

fn cmd_analyze(data: &Path, config: Option<&Path>, out_dir: &Path) -> Result<()> {
    let cfg = load_config(config)?;
    let (sample, input) = load_data(data)?;
    let analysis = analysis_from_fit(&sample, fit(&sample, &cfg)?)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let center = "center_density.csv";
    let length = "length_density.csv";
    fs::write(out_dir.join(center), analysis.center_density.to_csv())?;
    fs::write(out_dir.join(length), analysis.length_density.to_csv())?;
    let report = Report {
        command: "analyze",
        version: VERSION,
        config: &cfg,
        input: Some(input),
        result: AnalyzeOutput {
            report: &analysis.report,
            center_density_csv: center,
            length_density_csv: length,
        },
    };
    fs::write(out_dir.join("report.json"), to_json(&report)?)?;
    Ok(())
}

#[derive(Serialize)]
struct HittingOutput {
    a: f64,
    b: f64,
    theta: ThetaParams,
    prob_eta_negative: f64,
    exact: f64,
    approx: Option<f64>,
    approx_error: Option<String>,
    conditional: f64,
}

fn cmd_hitting(a: f64, b: f64, theta: ThetaArgs, neglect_threshold: f64) -> Result<()> {
    if a.is_nan() || b.is_nan() || a > b {
        bail!("need a <= b, got a = {a}, b = {b}");
    }
    let theta = theta.theta()?;
    let k = Interval::new(a, b)?;
    let (approx, approx_error) = match hitting_approx(&theta, &k, neglect_threshold) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let out = HittingOutput {
        a,
        b,
        theta,
        prob_eta_negative: theta.prob_eta_negative(),
        exact: hitting_exact(&theta, &k)?,
        approx,
        approx_error,
        conditional: hitting_conditional(&theta, &k)?,
    };
    emit(None, &to_json(&out)?)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            n,
            seed,
            theta,
            out,
        } => cmd_simulate(n, seed, theta, out.as_deref()),
        Command::Fit { data, config, out } => cmd_fit(&data, config.as_deref(), out.as_deref()),
        Command::Table1 {
            config,
            reps,
            sizes,
            out,
            csv,
        } => cmd_table1(
            config.as_deref(),
            reps,
            sizes,
            out.as_deref(),
            csv.as_deref(),
        ),
        Command::Analyze {
            data,
            config,
            out_dir,
        } => cmd_analyze(&data, config.as_deref(), &out_dir),
        Command::Hitting {
            a,
            b,
            theta,
            neglect_threshold,
        } => cmd_hitting(a, b, theta, neglect_threshold),
    }
}
