use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use phytobase_core::fixtures::{self, CORPUS_NAMES};
use phytobase_core::model::validate_record;
use phytobase_core::narration::{build_narration, LanguageRegistry, LanguageTag};
use phytobase_core::pql::{
    evaluate_query, parse_query, structured_search, PlantSummary, SearchCriteria,
};
use phytobase_core::store::io::decode_source;
use phytobase_core::store::{Database, Format, RecordStore, Selection};
use phytobase_core::{NarrationError, PqlError, StoreError};
use serde::Serialize;
use thiserror::Error;

use crate::service::{serve, ServeError, ServiceConfig, DEFAULT_BIND};

#[derive(Debug, Parser)]
#[command(name = "phytobase", version, about = "Medicinal plant knowledge base")]
pub struct Cli {
    /// Directory holding the snapshot and operation log.
    #[arg(long, global = true, default_value = "phytobase-data")]
    pub data: PathBuf,
    /// csv or json. Import and export default to the file extension, then
    /// json; other commands print text unless json is asked for.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Narration language tag.
    #[arg(long, global = true)]
    pub lang: Option<String>,
    /// Refuse every command that would write to the data directory.
    #[arg(long, global = true)]
    pub read_only: bool,
    /// Address `serve` listens on.
    #[arg(long, global = true, default_value = DEFAULT_BIND)]
    pub bind: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upsert every valid record from a CSV or JSON file (`-` for stdin).
    Import {
        file: PathBuf,
        /// Register an extra ailment code before importing.
        #[arg(long = "code", value_name = "CODE=NAME", value_parser = parse_pair)]
        codes: Vec<(String, String)>,
    },
    /// Write records, optionally only those used for one ailment.
    Export {
        #[arg(long)]
        ailment: Option<String>,
        /// Destination file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a CSV or JSON file without importing it.
    Validate { file: PathBuf },
    /// Run a PQL statement.
    Query { text: String },
    /// Structured search with `field=value` criteria.
    Search {
        #[arg(required = true, value_name = "FIELD=VALUE", value_parser = parse_pair)]
        criteria: Vec<(String, String)>,
    },
    /// Conservation status counts.
    Report,
    /// Print the narration script for one record.
    Narrate { id: String },
    /// Run the HTTP service.
    Serve,
    /// Load one of the bundled fixture corpora.
    Seed {
        #[arg(long, default_value = "all", value_parser = PossibleValuesParser::new(CORPUS_NAMES))]
        corpus: String,
    },
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.to_string())),
        _ => Err(format!("expected KEY=VALUE, got {s:?}")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Query(#[from] PqlError),
    #[error(transparent)]
    Narration(#[from] NarrationError),
    #[error(transparent)]
    Serve(#[from] ServeError),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
    #[error("{0} record(s) rejected")]
    Rejected(usize),
    #[error("{0} record(s) invalid")]
    Invalid(usize),
}

fn read_source(path: &Path) -> Result<Vec<u8>, CliError> {
    let file_error = |source| CliError::File {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(file_error)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(file_error)
    }
}

/// Read commands see an empty store when the data directory does not exist
/// yet.
fn open_for_read(data: &Path) -> Result<Database, StoreError> {
    if data.is_dir() {
        Database::open(data, true)
    } else {
        Ok(Database::in_memory(RecordStore::new()))
    }
}

fn open_for_write(cli: &Cli) -> Result<Database, StoreError> {
    if cli.read_only {
        return Err(StoreError::ReadOnly);
    }
    Database::open(&cli.data, false)
}

fn wants_json(cli: &Cli) -> bool {
    cli.format == Some(Format::Json)
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(io::Error::from)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn language(cli: &Cli, registry: &LanguageRegistry) -> Result<LanguageTag, NarrationError> {
    match &cli.lang {
        Some(code) => registry.lookup(code),
        None => Ok(LanguageTag::english()),
    }
}

/// Executes one parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Import { file, codes } => {
            let source = read_source(file)?;
            let format = cli.format.unwrap_or_else(|| Format::from_path(file));
            let db = open_for_write(cli)?;
            for (code, name) in codes {
                db.register_code(code, name)?;
            }
            let report = db.import(&source, format)?;
            db.compact()?;
            if wants_json(cli) {
                write_json(out, &report)?;
            } else {
                writeln!(
                    out,
                    "imported {}, rejected {}, warnings {}",
                    report.imported,
                    report.rejected.len(),
                    report.warnings
                )?;
                for r in &report.rejected {
                    writeln!(out, "{}: {}", r.locator, r.report)?;
                }
            }
            if !report.rejected.is_empty() {
                return Err(CliError::Rejected(report.rejected.len()));
            }
        }
        Command::Export { ailment, output } => {
            let format = cli
                .format
                .or_else(|| output.as_deref().map(Format::from_path))
                .unwrap_or(Format::Json);
            let selection = ailment.clone().map(Selection::Ailment);
            let bytes = open_for_read(&cli.data)?
                .read()
                .export_records(selection.as_ref(), format)?;
            match output {
                Some(path) => fs::write(path, bytes).map_err(|source| CliError::File {
                    path: path.clone(),
                    source,
                })?,
                None => out.write_all(&bytes)?,
            }
        }
        Command::Validate { file } => {
            let source = read_source(file)?;
            let format = cli.format.unwrap_or_else(|| Format::from_path(file));
            let db = open_for_read(&cli.data)?;
            let store = db.read();
            let (mut checked, mut invalid) = (0, 0);
            for (locator, decoded) in decode_source(&source, format)? {
                checked += 1;
                let report = match decoded {
                    Ok(record) => validate_record(&record, store.codes()),
                    Err(report) => report,
                };
                if !report.is_ok() {
                    invalid += 1;
                }
                if !report.errors.is_empty() || !report.warnings.is_empty() {
                    writeln!(out, "{locator}: {report}")?;
                }
            }
            writeln!(out, "checked {checked}, invalid {invalid}")?;
            if invalid > 0 {
                return Err(CliError::Invalid(invalid));
            }
        }
        Command::Query { text } => {
            let q = parse_query(text)?;
            let results = evaluate_query(&q, &open_for_read(&cli.data)?.read())?;
            if wants_json(cli) {
                write_json(out, &results)?;
            } else {
                out.write_all(results.to_text_table().as_bytes())?;
            }
        }
        Command::Search { criteria } => {
            let criteria = SearchCriteria::from_pairs(criteria.iter().cloned())?;
            let db = open_for_read(&cli.data)?;
            let store = db.read();
            let results = structured_search(&criteria, &store)?;
            if wants_json(cli) {
                write_json(out, &PlantSummary::from_results(&results, &store))?;
            } else {
                out.write_all(results.to_text_table().as_bytes())?;
            }
        }
        Command::Report => {
            let report = open_for_read(&cli.data)?.read().status_report();
            if wants_json(cli) {
                write_json(out, &report)?;
            } else {
                out.write_all(report.to_text_table().as_bytes())?;
            }
        }
        Command::Narrate { id } => {
            let registry = LanguageRegistry::builtin()?;
            let lang = language(cli, &registry)?;
            let db = open_for_read(&cli.data)?;
            let store = db.read();
            let script = build_narration(store.get(id)?, &lang, &registry, store.codes())?
                .with_revision(store.revision());
            if wants_json(cli) {
                write_json(out, &script)?;
            } else {
                out.write_all(script.to_plaintext().as_bytes())?;
            }
        }
        Command::Serve => {
            let registry = LanguageRegistry::builtin()?;
            let config = ServiceConfig {
                bind: cli.bind.clone(),
                data: cli.data.clone(),
                read_only: cli.read_only,
                default_language: language(cli, &registry)?,
            };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(serve(config))?;
        }
        Command::Seed { corpus } => {
            let records = fixtures::corpus(corpus).unwrap_or_default();
            let db = open_for_write(cli)?;
            let count = records.len();
            for record in records {
                db.upsert(record)?;
            }
            db.compact()?;
            writeln!(out, "seeded {count} records from {corpus}")?;
        }
    }
    Ok(())
}
