#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::Cli;
use config::{load_config, Resolver};
use error::CliError;
use table::{emit_table, Format};

fn meta_path(cli: &Cli) -> Option<PathBuf> {
    cli.common.meta.clone().or_else(|| {
        cli.common.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".meta.json");
            PathBuf::from(s)
        })
    })
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = match &cli.common.config {
        Some(p) => load_config(p)?,
        None => Default::default(),
    };
    let mut resolver = Resolver::new(config);
    let outcome = commands::run(&cli.command, &mut resolver)?;
    let unused = resolver.unused_keys();
    if !unused.is_empty() {
        return Err(CliError::Validation(format!(
            "config keys not used by {}: {}",
            cli.command.name(),
            unused.join(", ")
        )));
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    write_out(cli.common.output.as_ref(), &emit_table(&outcome.table, cli.common.format))?;
    if let Some(path) = meta_path(cli) {
        let meta = json!({
            "tool": "xpzeta",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": cli.command.name(),
            "format": match cli.common.format { Format::Csv => "csv", Format::Json => "json" },
            "columns": outcome.table.columns,
            "rows": outcome.table.rows.len(),
            "parameters": resolver.into_metadata(),
            "diagnostics": outcome.diagnostics,
            "warnings": outcome.warnings,
            "status": outcome.failure.as_ref().map_or("ok", |e| e.kind()),
        });
        let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    outcome.failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
