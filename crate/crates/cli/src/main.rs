use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lingshift::driftstats::Grouping;
use lingshift::pipeline::{self, PipelineConfig, YearRange};
use lingshift::Error;

#[derive(Parser)]
#[command(name = "lingshift", version, about = "Stylometric drift analysis of time-stamped abstract corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON pipeline config; relative paths in it resolve against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// JSONL corpus, overriding the config.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// doc_id,country sidecar, overriding the config.
    #[arg(long, global = true)]
    sidecar: Option<PathBuf>,
    /// Directory holding replacement resource files.
    #[arg(long, global = true)]
    resources: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Trend-fit years, e.g. 2014-2022.
    #[arg(long, global = true)]
    fit_window: Option<YearRange>,
    /// Post-event years, e.g. 2023.
    #[arg(long, global = true)]
    post_window: Option<YearRange>,
    /// none, discipline, language-group or country.
    #[arg(long, global = true)]
    group_by: Option<Grouping>,
    /// Documents sampled per period.
    #[arg(long, global = true)]
    sample: Option<usize>,
    /// Increase log verbosity (-v, -vv).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Check resources and config; report norms coverage on the corpus.
    Validate,
    /// Write the per-period sample list.
    Sample,
    /// Build the feature store.
    Analyze,
    /// Shift tests, change rates and period means from the feature store.
    Report,
    /// First-occurrence new-word table.
    NewWords,
    /// POS-category frequency shift table.
    PosShift,
}

fn config(common: &Common) -> Result<PipelineConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(p) = &common.corpus {
        cfg.corpus = Some(p.clone());
    }
    if let Some(p) = &common.sidecar {
        cfg.sidecar = Some(p.clone());
    }
    if let Some(p) = &common.resources {
        cfg.resources.dir = Some(p.clone());
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(o) = &common.out {
        cfg.output_dir = o.clone();
    }
    if let Some(w) = common.fit_window {
        cfg.fit_window = w;
    }
    if let Some(w) = common.post_window {
        cfg.post_window = w;
    }
    if let Some(g) = common.group_by {
        cfg.group_by = g;
    }
    if let Some(n) = common.sample {
        cfg.sample_per_period = Some(n);
    }
    Ok(cfg)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("summary serializes"));
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = config(&cli.common)?;
    match cli.command {
        Command::Validate => emit(&pipeline::cmd_validate(&cfg)?),
        Command::Sample => emit(&serde_json::json!({ "sampled": pipeline::cmd_sample(&cfg)? })),
        Command::Analyze => emit(&pipeline::cmd_analyze(&cfg)?),
        Command::Report => emit(&pipeline::cmd_report(&cfg)?),
        Command::NewWords => emit(&serde_json::json!({ "new_words": pipeline::cmd_new_words(&cfg)? })),
        Command::PosShift => emit(&serde_json::json!({ "rows": pipeline::cmd_pos_shift(&cfg)? })),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.common.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
