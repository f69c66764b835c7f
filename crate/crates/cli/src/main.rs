//! Command-line runner for batch active-learning experiments.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use albatch::harness::{
    aggregate_runs, bench_selection, read_raw_csv, render_aggregate_csv, run_experiment,
    write_aggregate_csv, write_raw_csv, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "albatch", version, about = "Batch active-learning experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's base_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Where raw.csv and aggregate.csv go; overrides the config's output_dir.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads (does not affect results, only wall time).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment and write raw + aggregate CSV files.
    Run(RunArgs),
    /// Recompute the aggregate CSV from a raw CSV.
    Report {
        /// Raw results CSV produced by `run`.
        #[arg(long)]
        raw: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time each strategy's selection on one fixed pool snapshot.
    Bench(RunArgs),
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Report { raw, output } => report(raw, output),
        Command::Bench(args) => bench(args),
    }
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::from_json_file(&args.config)
        .with_context(|| format!("reading config {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    if let Some(dir) = &args.output_dir {
        config.output_dir = Some(dir.clone());
    }
    config.validate().context("validating config")?;
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("initializing thread pool")?;
    }
    Ok(config)
}

fn run(args: RunArgs) -> Result<()> {
    let config = load_config(&args)?;
    let output_dir = config.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&output_dir)
        .with_context(|| format!("creating {}", output_dir.display()))?;

    let output = run_experiment(&config).context("running experiment")?;

    let raw_path = output_dir.join("raw.csv");
    let aggregate_path = output_dir.join("aggregate.csv");
    write_raw_csv(&output.runs, &raw_path)?;
    write_aggregate_csv(&output.aggregates, &aggregate_path)?;

    println!("wrote {}", raw_path.display());
    println!("wrote {}", aggregate_path.display());
    for curve in &output.aggregates {
        if let Some(last) = curve.points.last() {
            println!(
                "{}: final mean accuracy {:.4} [{:.4}, {:.4}] at {} labels",
                curve.strategy, last.mean_accuracy, last.p5, last.p95, last.labeled_count
            );
        }
    }
    Ok(())
}

fn report(raw: PathBuf, output: Option<PathBuf>) -> Result<()> {
    let runs = read_raw_csv(&raw).with_context(|| format!("reading {}", raw.display()))?;
    let aggregates = aggregate_runs(&runs);
    match output {
        Some(path) => {
            write_aggregate_csv(&aggregates, &path)?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", render_aggregate_csv(&aggregates)?),
    }
    Ok(())
}

fn bench(args: RunArgs) -> Result<()> {
    let config = load_config(&args)?;
    let rows = bench_selection(&config).context("running bench")?;

    let mut text = String::from("strategy,pool_size,candidates,selection_seconds\n");
    for row in &rows {
        text.push_str(&format!(
            "{},{},{},{:.6}\n",
            row.strategy, row.pool_size, row.candidates, row.selection_seconds
        ));
    }
    print!("{text}");
    if let Some(dir) = &config.output_dir {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("bench.csv");
        std::fs::write(&path, text)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
