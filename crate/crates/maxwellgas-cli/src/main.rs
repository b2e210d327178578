//! `maxwellgas <mode> --config <path> --out <dir> [--seed N]`

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use maxwellgas_cli::failure::{CliError, EXIT_CONFIG};
use maxwellgas_cli::scenario::{write_json, ERROR_FILE};
use maxwellgas_cli::{parse_config, run_scenario, Mode, THREADS_VAR};

/// Kinetic transport tables, fluid runs, lattice-gas runs and the invariant suite.
#[derive(Debug, Parser)]
#[command(name = "maxwellgas", version)]
struct Args {
    /// transport, fluid, lattice (or latticesim) or verify.
    mode: String,
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Seed for randomized parts; overrides the configuration's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Config(vec![format!("{THREADS_VAR} must be a positive integer, got `{raw}`")]))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(vec![format!("{THREADS_VAR}: {e}")]))
}

fn execute(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    configure_threads()?;
    let mode: Mode = args.mode.parse().map_err(|e: String| CliError::Config(vec![e]))?;
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(vec![format!("cannot read {}: {e}", args.config.display())]))?;
    let mut cfg = parse_config(&text, Some(mode))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    run_scenario(&cfg, &text, &args.out)
}

fn report_failure(out: &Path, err: &CliError) {
    eprintln!("maxwellgas: {err}");
    for line in err.details().iter().skip(usize::from(err.details().len() == 1)) {
        eprintln!("  - {line}");
    }
    let written = fs::create_dir_all(out).map_err(CliError::from).and_then(|_| write_json(&out.join(ERROR_FILE), &err.to_json()));
    if let Err(e) = written {
        eprintln!("maxwellgas: could not write {}: {e}", out.join(ERROR_FILE).display());
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", args.out.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report_failure(&args.out, &e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
