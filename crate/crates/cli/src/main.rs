use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use z2cover_core::assembly::{run_pipeline, FailureKind, TowerReport};
use z2cover_core::config::RunConfig;
use z2cover_core::report::{failure_json, matrix_dump, report_json, to_text};

const EXIT_CHECK: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "z2cover", version, about = "Exact verification of a Z2^3 cover of the plane and its double cover on 24 nodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and print a summary.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Use the built-in configuration.
    #[arg(long = "default", conflicts_with = "config", required_unless_present = "config")]
    use_default: bool,
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write the exact bicanonical evaluation matrix here.
    #[arg(long, value_name = "PATH")]
    dump_matrix: Option<PathBuf>,
    /// Print every check with its detail.
    #[arg(long)]
    verbose: bool,
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn summary(r: &TowerReport, verbose: bool) {
    for c in &r.checks {
        if verbose || !c.passed {
            println!("[{}] {:>2} {} ({}): {}", if c.passed { "ok" } else { "FAIL" }, c.id, c.name, c.stage, c.detail);
        }
    }
    if verbose {
        for l in &r.levels {
            println!(
                "  {:<3} chi = {:>2}, p_g = {}, q = {}, K^2 = {:>3}, nodes = {:>2}",
                l.name, l.chi, l.p_g, l.q, l.k_squared, l.nodes
            );
        }
    }
    let h = r.headline();
    let degree = h.canonical_degree.map_or("undefined".to_string(), |d| d.to_string());
    println!("S: p_g = {}, q = {}, K^2 = {}, canonical degree = {degree}", h.p_g, h.q, h.k_squared);
    println!("{} of {} checks passed", r.checks.iter().filter(|c| c.passed).count(), r.checks.len());
}

fn verify(args: VerifyArgs) -> Result<u8, (u8, String)> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_path(path).map_err(|e| (EXIT_CONFIG, e.to_string()))?,
        None => RunConfig::default(),
    };
    config.report = args.report.or(config.report);
    config.dump_matrix = args.dump_matrix.or(config.dump_matrix);
    config.verbose |= args.verbose;

    let start = Instant::now();
    let outcome = run_pipeline(&config);
    let elapsed = start.elapsed();
    match outcome {
        Ok(r) => {
            summary(&r, config.verbose);
            if let Some(path) = &config.report {
                write(path, &to_text(&report_json(&r))).map_err(|e| (EXIT_CONFIG, e))?;
            }
            if let Some(path) = &config.dump_matrix {
                write(path, &to_text(&matrix_dump(&r))).map_err(|e| (EXIT_CONFIG, e))?;
            }
            println!("elapsed: {:.3} s", elapsed.as_secs_f64());
            match r.first_failure() {
                None => Ok(0),
                Some(c) => {
                    println!("verification failed at stage {}: {}", c.stage, c.name);
                    Ok(EXIT_CHECK)
                }
            }
        }
        Err(e) => {
            if let Some(path) = &config.report {
                write(path, &to_text(&failure_json(&config, &e))).map_err(|e| (EXIT_CONFIG, e))?;
            }
            let code = match e.kind {
                FailureKind::Configuration => EXIT_CONFIG,
                FailureKind::Check => EXIT_CHECK,
            };
            Err((code, format!("stage {}: {}", e.stage, e.message)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Verify(args) = cli.command;
    match verify(args) {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
