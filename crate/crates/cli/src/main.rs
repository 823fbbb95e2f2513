use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use capline::{
    build_prefix_lexicon, encode, extract, load_lexicon, parse_frequency_list, AuthorPrefixIndex,
};
use capline_cli::corpus::load_corpus;
use capline_cli::eval::{evaluate, lexicon_sensitivity};
use capline_cli::output::{encode_dump, error_json, tsv_rows, TSV_HEADER};
use capline_cli::{LexiconOptions, ResultRecord};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "capline",
    version,
    about = "Extract author names from plain-text title pages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Extract authors from one or more text files.
    Extract {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        lexicons: LexiconOptions,
    },
    /// Print the code string of a text file.
    Encode {
        path: PathBuf,
        /// Add one row per symbol: index, symbol, byte offsets, source slice.
        #[arg(long)]
        spans: bool,
        #[command(flatten)]
        lexicons: LexiconOptions,
    },
    /// Build a prefix lexicon from author names and a word frequency list.
    BuildLexicon {
        #[arg(long, value_name = "PATH")]
        names: PathBuf,
        #[arg(long, value_name = "PATH")]
        freqs: PathBuf,
        #[arg(long, default_value_t = 50)]
        top_k: usize,
        /// Output file; standard output when absent.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Evaluate extraction against a directory of `.txt`/`.json` pairs.
    Evaluate {
        corpus_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[command(flatten)]
        lexicons: LexiconOptions,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_extract(paths: &[PathBuf], format: Format, options: &LexiconOptions) -> Result<ExitCode> {
    let config = options.extract_config()?;
    let results: Vec<Result<ResultRecord, String>> = paths
        .par_iter()
        .map(|path| {
            let name = path.display().to_string();
            let text = read(path).map_err(|e| format!("{e:#}"))?;
            Ok(ResultRecord::new(name, &extract(&text, &config)))
        })
        .collect();

    let mut out = io::stdout().lock();
    if format == Format::Tsv {
        writeln!(out, "{TSV_HEADER}")?;
    }
    let mut failures = 0;
    for (path, result) in paths.iter().zip(&results) {
        match result {
            Ok(record) => match format {
                Format::Json => writeln!(out, "{}", record.to_json())?,
                Format::Tsv => write!(out, "{}", tsv_rows(record))?,
            },
            Err(error) => {
                failures += 1;
                let path = path.display().to_string();
                match format {
                    Format::Json => writeln!(out, "{}", error_json(&path, error))?,
                    Format::Tsv => eprintln!("capline: {error}"),
                }
            }
        }
    }
    out.flush()?;
    Ok(if failures == paths.len() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_encode(path: &Path, spans: bool, options: &LexiconOptions) -> Result<ExitCode> {
    let text = read(path)?;
    let config = options.extract_config()?.encoder_config();
    print!("{}", encode_dump(&encode(&text, &config), spans));
    Ok(ExitCode::SUCCESS)
}

fn cmd_build_lexicon(
    names: &Path,
    freqs: &Path,
    top_k: usize,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let names =
        load_lexicon(&read(names)?).with_context(|| format!("parsing {}", names.display()))?;
    let candidates = parse_frequency_list(&read(freqs)?)
        .with_context(|| format!("parsing {}", freqs.display()))?;
    let entries = build_prefix_lexicon(&candidates, &AuthorPrefixIndex::new(names), top_k);
    let text: String = entries
        .iter()
        .map(|e| format!("{}\t# {}\n", e.prefix, e.frequency))
        .collect();
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_evaluate(dir: &Path, format: ReportFormat, options: &LexiconOptions) -> Result<ExitCode> {
    let corpus = load_corpus(dir)?;
    let mut report = evaluate(&corpus, &options.extract_config()?);
    report.sensitivity = lexicon_sensitivity(&corpus, options)?;
    match format {
        ReportFormat::Text => print!("{}", report.summary()),
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Extract {
            paths,
            format,
            lexicons,
        } => cmd_extract(&paths, format, &lexicons),
        Command::Encode {
            path,
            spans,
            lexicons,
        } => cmd_encode(&path, spans, &lexicons),
        Command::BuildLexicon {
            names,
            freqs,
            top_k,
            output,
        } => cmd_build_lexicon(&names, &freqs, top_k, output.as_deref()),
        Command::Evaluate {
            corpus_dir,
            format,
            lexicons,
        } => cmd_evaluate(&corpus_dir, format, &lexicons),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("capline: {error:#}");
            ExitCode::FAILURE
        }
    }
}
