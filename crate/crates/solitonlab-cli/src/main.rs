//! solitonlab command-line interface: soliton generators, evolvers, charge
//! computation, GLM solving, Bäcklund constructions, Lax checks, and the
//! acceptance suite, with reproducible config-driven runs.
//!
//! Every run writes its effective config next to its outputs; identical
//! configs produce byte-identical CSV. Parameter sweeps fan out over worker
//! threads capped by SOLITONLAB_THREADS.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "solitonlab", version, about = "integrable-systems toolkit")]
struct Cli {
    /// JSON config file; individual flags override its entries
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    /// output directory (default out/<command>/<timestamp>)
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// validate the configuration and exit without computing
    #[arg(long, global = true)]
    dry_run: bool,
    /// sweep one numeric parameter: --sweep key=v1,v2,v3
    #[arg(long, global = true)]
    sweep: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// closed-form soliton profiles (KdV N-soliton, sinh-Gordon, NLS-type)
    Soliton(commands::soliton::Args),
    /// time evolution of continuum or lattice models
    Evolve(commands::evolve::Args),
    /// conserved densities and charges
    Charges(commands::charges::Args),
    /// Gelfand-Levitan-Marchenko solver
    Glm(commands::glm::Args),
    /// Backlund-transformation constructions
    Bt(commands::bt::Args),
    /// symbolic zero-curvature check for a registered Lax pair
    Laxcheck(commands::laxcheck::Args),
    /// run the acceptance suite
    Verify(commands::verify::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command_name = match &cli.command {
        Command::Soliton(_) => "soliton",
        Command::Evolve(_) => "evolve",
        Command::Charges(_) => "charges",
        Command::Glm(_) => "glm",
        Command::Bt(_) => "bt",
        Command::Laxcheck(_) => "laxcheck",
        Command::Verify(_) => "verify",
    };
    let out_root = match output::resolve_out_dir(cli.out.clone(), command_name) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let run = |cmd: Command, dir: &std::path::Path| -> Result<bool, String> {
        match cmd {
            Command::Soliton(a) => commands::soliton::run(a, cli.config.as_deref(), cli.dry_run, dir).map(|_| true),
            Command::Evolve(a) => commands::evolve::run(a, cli.config.as_deref(), cli.dry_run, dir).map(|_| true),
            Command::Charges(a) => commands::charges::run(a, cli.config.as_deref(), cli.dry_run, dir).map(|_| true),
            Command::Glm(a) => commands::glm::run(a, cli.config.as_deref(), cli.dry_run, dir).map(|_| true),
            Command::Bt(a) => commands::bt::run(a, cli.config.as_deref(), cli.dry_run, dir).map(|_| true),
            Command::Laxcheck(a) => commands::laxcheck::run(a, cli.dry_run, dir),
            Command::Verify(a) => commands::verify::run(a, cli.dry_run, dir),
        }
    };

    let result = match cli.sweep.clone() {
        None => run(cli.command.clone(), &out_root),
        Some(spec) => match parse_sweep(&spec) {
            Err(e) => {
                eprintln!("config error: {e}");
                return ExitCode::from(2);
            }
            Ok((key, values)) => {
                let threads = sweep_threads(values.len());
                let mut ok = true;
                let mut idx = 0;
                while idx < values.len() {
                    let chunk: Vec<f64> = values[idx..(idx + threads).min(values.len())].to_vec();
                    let handles: Vec<_> = chunk
                        .into_iter()
                        .map(|v| {
                            let cmd = override_param(cli.command.clone(), &key, v);
                            let dir = out_root.join(format!("{key}={v}"));
                            std::thread::spawn(move || -> Result<bool, String> {
                                std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                                match cmd {
                                    Ok(c) => run_in_thread(c, &dir),
                                    Err(e) => Err(e),
                                }
                            })
                        })
                        .collect();
                    for h in handles {
                        match h.join() {
                            Ok(Ok(passed)) => ok &= passed,
                            Ok(Err(e)) => {
                                eprintln!("config error: {e}");
                                return ExitCode::from(2);
                            }
                            Err(_) => {
                                eprintln!("sweep worker panicked");
                                return ExitCode::from(2);
                            }
                        }
                    }
                    idx += threads;
                }
                Ok(ok)
            }
        },
    };

    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Sweep workers run without access to the global --config (overrides are
/// applied to the already-parsed flags).
fn run_in_thread(cmd: Command, dir: &std::path::Path) -> Result<bool, String> {
    match cmd {
        Command::Soliton(a) => commands::soliton::run(a, None, false, dir).map(|_| true),
        Command::Evolve(a) => commands::evolve::run(a, None, false, dir).map(|_| true),
        Command::Charges(a) => commands::charges::run(a, None, false, dir).map(|_| true),
        Command::Glm(a) => commands::glm::run(a, None, false, dir).map(|_| true),
        Command::Bt(a) => commands::bt::run(a, None, false, dir).map(|_| true),
        Command::Laxcheck(a) => commands::laxcheck::run(a, false, dir),
        Command::Verify(a) => commands::verify::run(a, false, dir),
    }
}

fn parse_sweep(spec: &str) -> Result<(String, Vec<f64>), String> {
    let (key, vals) = spec.split_once('=').ok_or("sweep must be key=v1,v2,...")?;
    let values: Result<Vec<f64>, _> = vals.split(',').map(|v| v.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| format!("bad sweep value: {e}"))?;
    if values.is_empty() {
        return Err("sweep needs at least one value".into());
    }
    Ok((key.to_string(), values))
}

fn sweep_threads(n: usize) -> usize {
    let cap = std::env::var("SOLITONLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1));
    cap.max(1).min(n.max(1))
}

fn override_param(cmd: Command, key: &str, value: f64) -> Result<Command, String> {
    match cmd {
        Command::Soliton(a) => commands::soliton::override_param(a, key, value).map(Command::Soliton),
        Command::Evolve(a) => commands::evolve::override_param(a, key, value).map(Command::Evolve),
        Command::Glm(a) => commands::glm::override_param(a, key, value).map(Command::Glm),
        _ => Err(format!("subcommand does not support sweeping `{key}`")),
    }
}
