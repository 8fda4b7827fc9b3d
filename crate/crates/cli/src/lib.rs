//! Command-line front end: experiment configs, figure reproduction and
//! CSV emission for the entangling-power library.

pub mod config;
pub mod csvout;
pub mod figures;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{parse_config, ExperimentConfig, ExperimentKind};
use csvout::{Cell, Table};
use entpower::gates::parse_matrix_file;
use entpower::linalg::ComplexMatrix;
use entpower::optim::OptimizerConfig;
use entpower::power::{
    entangling_power, noisy_entangling_power, quenched_average_power, survey, InputParams,
    PowerResult, QuenchConfig, SurveyConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "entpower",
    about = "Entangling power of few-qubit gates: ideal, disordered and noisy",
    version
)]
pub struct Cli {
    /// Worker threads for data-parallel work; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ideal entangling power of one gate.
    Power(RunArgs),
    /// Quenched average power under Gaussian parameter disorder.
    Quench(RunArgs),
    /// Entangling power with local noise on the inputs.
    Noisy(RunArgs),
    /// Power distribution over an ensemble of random gates.
    Survey(RunArgs),
    /// Rebuild one of the built-in experiment presets (fig2..fig15).
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Key = value experiment description.
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; overrides the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path; overrides the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Figure id, fig2..fig15.
    pub figure: String,
    /// Directory the CSV files are written into.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Check the qualitative shape of the result and fail if violated.
    #[arg(long)]
    pub verify: bool,
    /// Override the per-figure default realization count.
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Override the surveyed gate count (fig9).
    #[arg(long)]
    pub n_gates: Option<usize>,
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::Power(args) => run_experiment(&args, ExperimentKind::Power),
        Command::Quench(args) => run_experiment(&args, ExperimentKind::Quench),
        Command::Noisy(args) => run_experiment(&args, ExperimentKind::Noisy),
        Command::Survey(args) => run_experiment(&args, ExperimentKind::Survey),
        Command::Reproduce(args) => {
            let opts = figures::FigureOptions {
                out_dir: args.out.clone(),
                seed: args.seed,
                verify: args.verify,
                realizations: args.realizations,
                n_gates: args.n_gates,
            };
            figures::ensure_out_dir(&args.out)?;
            let files = figures::reproduce(&args.figure, &opts)?;
            for file in files {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
    }
}

fn run_experiment(args: &RunArgs, kind: ExperimentKind) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = parse_config(&text, kind)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    let out_path = cfg
        .out
        .clone()
        .ok_or_else(|| anyhow::anyhow!("missing key: out (or pass --out)"))?;

    match kind {
        ExperimentKind::Power | ExperimentKind::Noisy => run_power(&cfg, &out_path),
        ExperimentKind::Quench => run_quench(&cfg, &out_path),
        ExperimentKind::Survey => run_survey(&cfg, &out_path),
    }
}

fn realize_gate(cfg: &ExperimentConfig) -> Result<ComplexMatrix> {
    if let Some(spec) = &cfg.gate {
        return Ok(spec.realize()?);
    }
    let path = cfg
        .matrix_file
        .as_ref()
        .expect("parser guarantees gate or matrix_file");
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_matrix_file(&text)?)
}

fn optimizer_config(cfg: &ExperimentConfig) -> OptimizerConfig {
    OptimizerConfig {
        restarts: cfg.restarts,
        max_iters: cfg.max_iters,
        ftol: cfg.ftol,
    }
}

fn run_power(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let gate = realize_gate(cfg)?;
    let opt = optimizer_config(cfg);
    let result: PowerResult = if cfg.channels.is_empty() {
        entangling_power(&gate, cfg.measure, cfg.inputs, &opt, cfg.seed)?
    } else {
        noisy_entangling_power(&gate, &cfg.channels, cfg.measure, cfg.inputs, &opt, cfg.seed)?
    };

    let mut header: Vec<String> = vec!["measure".into(), "value".into()];
    let mut row: Vec<Cell> = vec![
        Cell::Label(result.measure.to_string()),
        Cell::Num(result.value),
    ];
    match &result.argmax {
        InputParams::Product(p) => {
            for (i, (&t, &x)) in p.thetas.iter().zip(&p.xis).enumerate() {
                header.push(format!("theta_{}", i + 1));
                header.push(format!("xi_{}", i + 1));
                row.push(Cell::Num(t));
                row.push(Cell::Num(x));
            }
        }
        InputParams::Bisep(b) => {
            for (name, value) in [
                ("pair_theta_1", b.pair_thetas[0]),
                ("pair_theta_2", b.pair_thetas[1]),
                ("pair_theta_3", b.pair_thetas[2]),
                ("pair_xi_1", b.pair_xis[0]),
                ("pair_xi_2", b.pair_xis[1]),
                ("pair_xi_3", b.pair_xis[2]),
                ("single_theta", b.single_theta),
                ("single_xi", b.single_xi),
            ] {
                header.push(name.into());
                row.push(Cell::Num(value));
            }
        }
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::new(&header_refs);
    table.push(row);
    table.write(out)?;

    let best_restart = result
        .restart_values
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "value {} over {} restarts (best restart {}, {} simplex iterations)",
        csvout::fmt9(result.value),
        result.restart_values.len(),
        csvout::fmt9(best_restart),
        result.iterations
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn run_quench(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let family = cfg.family.as_ref().expect("parser sets family for quench");
    let qc = QuenchConfig {
        means: cfg.means.clone(),
        sds: cfg.sds.clone(),
        realizations: cfg.realizations,
        seed: cfg.seed,
        reuse_optimal_input: cfg.reuse_optimal_input,
        keep_values: false,
    };
    let result =
        quenched_average_power(family, cfg.measure, cfg.inputs, &qc, &optimizer_config(cfg))?;
    let mut table = Table::new(&["measure", "mean", "std_error", "realizations"]);
    table.push(vec![
        Cell::Label(cfg.measure.to_string()),
        Cell::Num(result.mean),
        Cell::Num(result.std_error),
        Cell::Int(result.realizations as u64),
    ]);
    table.write(out)?;
    println!(
        "quenched mean {} +- {} ({} realizations)",
        csvout::fmt9(result.mean),
        csvout::fmt9(result.std_error),
        result.realizations
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn run_survey(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let ensemble = cfg.ensemble.expect("parser sets ensemble for survey");
    let stats = survey(
        ensemble,
        &cfg.channels,
        cfg.measure,
        cfg.inputs,
        &optimizer_config(cfg),
        &SurveyConfig {
            n_gates: cfg.n_gates,
            seed: cfg.seed,
            compute_delta: cfg.compute_delta,
        },
    )?;

    let mut table = Table::new(&["bin_index", "bin_lo", "bin_hi", "mass"]);
    for (b, mass) in stats.bins.iter().enumerate() {
        table.push(vec![
            Cell::Int(b as u64),
            Cell::Num(b as f64 * 0.02),
            Cell::Num((b + 1) as f64 * 0.02),
            Cell::Num(*mass),
        ]);
    }
    table.write(out)?;

    let summary_path = summary_sibling(out);
    let mut summary = Table::new(&["n_gates", "mean", "sd"]);
    summary.push(vec![
        Cell::Int(stats.records.len() as u64),
        Cell::Num(stats.mean),
        Cell::Num(stats.sd),
    ]);
    summary.write(&summary_path)?;

    println!(
        "survey over {} gates: mean {} sd {}",
        stats.records.len(),
        csvout::fmt9(stats.mean),
        csvout::fmt9(stats.sd)
    );
    println!("wrote {}", out.display());
    println!("wrote {}", summary_path.display());
    Ok(())
}

fn summary_sibling(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "survey".into());
    let ext = out.extension().map(|s| s.to_string_lossy().into_owned());
    let name = match ext {
        Some(ext) => format!("{stem}_summary.{ext}"),
        None => format!("{stem}_summary"),
    };
    out.with_file_name(name)
}
