use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use encyc::http::ApiMode;
use encyc::pipeline::{Config, Pipeline, Stage};

#[derive(Parser)]
#[command(name = "encyc", version, about = "Encyclopedia facsimile pipeline")]
struct Cli {
    /// Pipeline config (TOML). Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for stage artifacts and the run manifest.
    #[arg(long, global = true, default_value = "work")]
    workdir: PathBuf,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// live, record or replay.
    #[arg(long, global = true, value_parser = parse_mode)]
    api_mode: Option<ApiMode>,
    /// Requests per second against the knowledge-graph APIs.
    #[arg(long, global = true)]
    rate_limit: Option<f64>,
    /// Minimum entry/description similarity for a link.
    #[arg(long, global = true)]
    link_threshold: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the page store into pages.jsonl.
    Ingest,
    /// Split pages into entries.
    Segment,
    /// Detect and resolve "Se X" entries.
    Crossref,
    /// Train the location head and flag location entries.
    ClassifyLocations,
    /// Align first-edition entries with second-edition entries.
    Match,
    /// Link location entries to knowledge-graph items.
    Link,
    /// Country and continent tables plus the map file.
    Stats,
    /// Score a stage against a gold file.
    Eval { stage: String, gold: PathBuf },
    /// Every stage in order.
    RunAll,
}

fn parse_mode(s: &str) -> Result<ApiMode, String> {
    s.parse()
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();

    let mut config = match &cli.config {
        Some(path) => Config::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(mode) = cli.api_mode {
        config.link.api_mode = mode;
    }
    if let Some(r) = cli.rate_limit {
        config.link.rate_limit = r;
    }
    if let Some(t) = cli.link_threshold {
        config.link.threshold = t;
    }
    let pipeline = Pipeline::new(config, &cli.workdir)?;

    let stage = match cli.command {
        Command::Ingest => Stage::Ingest,
        Command::Segment => Stage::Segment,
        Command::Crossref => Stage::Crossref,
        Command::ClassifyLocations => Stage::ClassifyLocations,
        Command::Match => Stage::Match,
        Command::Link => Stage::Link,
        Command::Stats => Stage::Stats,
        Command::Eval { stage, gold } => {
            let stage: Stage = stage.parse()?;
            let summary = pipeline
                .evaluate(stage, &gold)
                .with_context(|| format!("evaluating {stage} against {}", gold.display()))?;
            print!("{}", summary.to_text());
            return Ok(());
        }
        Command::RunAll => {
            for (stage, record) in pipeline.run_all()? {
                for (name, sum) in &record.outputs {
                    println!("{stage:18} {name:24} {sum}");
                }
            }
            return Ok(());
        }
    };
    let record = pipeline
        .run_stage(stage)
        .with_context(|| format!("stage {stage}"))?;
    for (name, sum) in &record.outputs {
        println!("{name:24} {sum}");
    }
    Ok(())
}
