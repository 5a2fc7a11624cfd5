//! `cesaro {bound|verify|kernel|lebesgue|converge|dlambda} --config <path>`
//!
//! Exit status: 0 on success, 1 when a verify check fails, 2 on a usage or
//! config error (nothing is written in that case).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cesaro_core::commands::{run, Command};
use cesaro_core::config::{OutputFormat, RunConfig};
use cesaro_core::report::Report;
use clap::Parser;

#[derive(Parser, Debug)]
#[command(name = "cesaro", version, about = "Cesàro means of orthogonal expansions on the cylinder")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to the config's `output`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for row computation.
    #[arg(long)]
    threads: Option<usize>,
}

fn write_report(report: &Report, format: OutputFormat, out: Option<&PathBuf>) -> Result<(), String> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => report.write_csv(&mut buf),
        OutputFormat::Json => report.write_json(&mut buf),
    }
    .map_err(|e| e.to_string())?;
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            let mut w = BufWriter::new(file);
            w.write_all(&buf).and_then(|_| w.flush()).map_err(|e| e.to_string())
        }
        None => io::stdout().write_all(&buf).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let config = match RunConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(cli.command, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = cli.format.unwrap_or(config.format);
    let out = cli.out.as_ref().or(config.output.as_ref());
    if let Err(e) = write_report(&report, format, out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.has_failure() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
