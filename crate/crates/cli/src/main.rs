use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use logiq_cli::compare::{compare_linear, CompareSpec};
use logiq_cli::oracle_check::run_oracle_check;
use logiq_cli::recipes::reproduce;
use logiq_cli::route_report::{format_rows, route_rows};
use logiq_cli::spec::{read_config, SweepSpec};
use logiq_cli::sweep::{run_sweep, write_file};
use logiq_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "logiq", version, about = "Logical-qubit gain experiments")]
struct Cli {
    /// Plain-text key = value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gain surface over memory time and gate error.
    Sweep {
        /// Config overrides, `key=value`; applied after --config.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output file name inside --out.
        #[arg(long, default_value = "sweep.csv")]
        name: String,
    },
    /// Data behind one figure.
    Reproduce {
        figure_id: String,
        /// Exit with status 3 if any published-number check fails.
        #[arg(long)]
        check: bool,
    },
    /// Linear model against the simulation.
    CompareLinear {
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Linear-model error rate per unit time.
        #[arg(long, default_value_t = 1.0)]
        p_e: f64,
        /// Linear-model QEC time (default: the scheduled one).
        #[arg(long)]
        t_qec: Option<f64>,
    },
    /// SWAP counts and QEC times per code and layout.
    RouteReport {
        #[arg(long, default_value_t = 1e-3)]
        gate_time: f64,
    },
    /// Trajectory oracle against the density-matrix engine.
    OracleCheck {
        #[arg(long, default_value_t = 100_000)]
        shots: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn sweep_spec(config: Option<&PathBuf>, set: &[String]) -> Result<SweepSpec> {
    let mut pairs = match config {
        Some(p) => read_config(p)?,
        None => Vec::new(),
    };
    for s in set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("--set expects key=value, got '{s}'")))?;
        pairs.push((k.to_string(), v.to_string()));
    }
    SweepSpec::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(e.to_string()))?;
    }
    match cli.cmd {
        Cmd::Sweep { set, name } => {
            let surface = run_sweep(&sweep_spec(cli.config.as_ref(), &set)?)?;
            let path = cli.out.join(name);
            surface.write_csv(&path)?;
            println!("wrote {} ({} points, max gain {:.4})", path.display(), surface.points.len(), surface.max_gain());
        }
        Cmd::Reproduce { figure_id, check } => {
            let o = reproduce(&figure_id, &cli.out)?;
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            for c in &o.checks {
                println!("{c}");
            }
            if check && !o.all_passed() {
                return Err(CliError::CheckFailed(format!("{figure_id}: published numbers not reproduced")));
            }
        }
        Cmd::CompareLinear { set, p_e, t_qec } => {
            let cs = CompareSpec {
                sweep: sweep_spec(cli.config.as_ref(), &set)?,
                p_e,
                t_qec,
            };
            let r = compare_linear(&cs)?;
            let path = cli.out.join("compare_linear.csv");
            write_file(&path, &r.to_csv(logiq_cli::compare::code_size(cs.sweep.code), p_e))?;
            print!("{}", r.summary());
            println!("wrote {}", path.display());
        }
        Cmd::RouteReport { gate_time } => print!("{}", format_rows(&route_rows(gate_time)?)),
        Cmd::OracleCheck { shots, seed } => {
            let mut ok = true;
            for r in run_oracle_check(shots, seed)? {
                let pass = r.agrees(3.0);
                ok &= pass;
                println!(
                    "{} {}: exact {:.6}, oracle {:.6} +/- {:.6}",
                    if pass { "PASS" } else { "FAIL" },
                    r.config.label(),
                    r.exact,
                    r.estimate.mean,
                    r.estimate.stderr
                );
            }
            if !ok {
                return Err(CliError::CheckFailed("oracle disagrees with density matrix".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
