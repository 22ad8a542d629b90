use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use sgordon::cli::run_and_write;
use sgordon::config::parse_config;
use sgordon::report::ReportFormat;

/// Spectral analysis of one-dimensional Schrödinger operators with
/// distributional potentials q = σ′ + τ.
///
/// The command and the potential live in a TOML configuration file; the
/// flags below override its scalar fields.  Exit status: 0 when the run
/// succeeds and every certificate passes, 1 when a certificate fails,
/// 2 on configuration or numeric errors.
#[derive(Parser)]
#[command(name = "sgordon", version)]
struct Args {
    /// Run configuration (TOML)
    config: PathBuf,
    /// Override params.tol
    #[arg(long)]
    tol: Option<f64>,
    /// Override the report path (defaults to the config's output.path,
    /// else stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the report format: csv or json
    #[arg(long)]
    format: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("sgordon: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: &Args) -> sgordon::Result<bool> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        sgordon::Error::Io(format!("cannot read config {}: {e}", args.config.display()))
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            return Err(sgordon::Error::Config("--tol must be positive".into()));
        }
        cfg.params.tol = tol;
    }
    if let Some(out) = &args.out {
        cfg.out_path = Some(out.display().to_string());
    }
    if let Some(fmt) = &args.format {
        cfg.format = fmt.parse::<ReportFormat>()?;
    }
    run_and_write(&cfg)
}
