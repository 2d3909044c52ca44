//! `xlingsim`: train, hash, index, query and evaluate multilingual corpora.

mod commands;
mod config;
mod error;
mod pipeline;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Task;
use config::RunConfig;
use error::CliError;
use pipeline::Mode;

#[derive(Parser)]
#[command(name = "xlingsim", version, about = "Cross-lingual document similarity via concept hashes")]
struct Cli {
    /// Run configuration file.
    #[arg(long, global = true, default_value = "xlingsim.conf")]
    config: PathBuf,
    /// Override the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the configured work directory.
    #[arg(long, global = true)]
    workdir: Option<PathBuf>,
    /// Override any config key, as `key=value`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tokenize and lemmatize corpora, writing tokens.<lang>.jsonl.
    Ingest {
        #[arg(long)]
        lang: Vec<String>,
    },
    /// Train one topic model per language.
    Train {
        #[arg(long)]
        lang: Vec<String>,
        /// Train label-aligned topics instead of unsupervised ones.
        #[arg(long)]
        labeled: bool,
    },
    /// Attach synsets to the topics of trained models.
    Annotate {
        #[arg(long)]
        lang: Vec<String>,
    },
    /// Compute hash codes for a corpus.
    Hash {
        #[arg(long)]
        lang: Vec<String>,
        #[arg(long, value_enum, default_value = "syn")]
        mode: Mode,
        /// JSONL corpus to hash instead of the configured one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Build the search index from hash files.
    Index {
        #[arg(long)]
        lang: Vec<String>,
        #[arg(long, value_enum, default_value = "syn")]
        mode: Mode,
    },
    /// Rank indexed documents against a text.
    Query {
        /// Language of the query text.
        #[arg(long)]
        lang: String,
        #[arg(long, value_enum, default_value = "syn")]
        mode: Mode,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Query text; read from stdin when omitted.
        text: Option<String>,
    },
    /// Score held-out documents.
    Evaluate {
        #[arg(long)]
        lang: Vec<String>,
        #[arg(long, value_enum)]
        task: Task,
        #[arg(long, value_enum, default_value = "syn")]
        mode: Mode,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::load(&cli.config)?;
    for item in &cli.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects key=value, got `{item}`")))?;
        config.set(key.trim(), value.trim(), Path::new("."))?;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(dir) = &cli.workdir {
        config.workdir = dir.clone();
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = load_config(&cli)?;
    match cli.command {
        Command::Ingest { lang } => commands::ingest(&config, &config.select_languages(&lang)?),
        Command::Train { lang, labeled } => commands::train(&config, &config.select_languages(&lang)?, labeled),
        Command::Annotate { lang } => commands::annotate(&config, &config.select_languages(&lang)?),
        Command::Hash { lang, mode, input } => {
            commands::hash(&config, &config.select_languages(&lang)?, mode, input.as_deref())
        }
        Command::Index { lang, mode } => commands::index(&config, &config.select_languages(&lang)?, mode),
        Command::Query { lang, mode, k, text } => {
            let text = match text {
                Some(t) => t,
                None => std::io::read_to_string(std::io::stdin())
                    .map_err(|e| CliError::io(Path::new("<stdin>"), e))?,
            };
            commands::query(&config, &lang, mode, k, &text)
        }
        Command::Evaluate { lang, task, mode } => {
            commands::evaluate(&config, &config.select_languages(&lang)?, task, mode)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::FAILURE
        }
    }
}
