use clap::{Args, Parser, Subcommand};
use ris_sim::config::{load_config, ConfigError, ExperimentConfig, Scenario};
use ris_sim::experiments::{
    run_interference_validation, run_moving_rx, run_power_comparison, run_ris_size_sweep,
};
use ris_sim::table::ResultTable;
use std::path::PathBuf;
use std::process::ExitCode;

/// Desk-scale reproduction of interference experiments in RIS-assisted
/// D-band networks: closed-form models cross-validated against a
/// phase-exact element-level simulator.
#[derive(Parser)]
#[command(name = "ris-sim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// TOML scenario configuration; missing keys take documented defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for all stochastic components.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo realizations.
    #[arg(long)]
    realizations: Option<usize>,
    /// Output CSV path; a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the paper's full ensemble sizes instead of the desk-scale
    /// defaults (interference validation: 4000 users, 1000 realizations).
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the RIS size at fixed geometry: analytic vs simulated RIS-link
    /// power with near-field markers.
    RisSizeSweep(CommonOpts),
    /// Received power along an Rx trajectory through the RIS near field.
    MovingRx(CommonOpts),
    /// Monte Carlo benchmark of the relayed-interference models, both
    /// interferer orientation modes.
    InterferenceValidation(CommonOpts),
    /// Analytic comparison of desired links and interference across RIS
    /// sizes.
    PowerComparison(CommonOpts),
}

impl Command {
    fn scenario(&self) -> Scenario {
        match self {
            Command::RisSizeSweep(_) => Scenario::RisSizeSweep,
            Command::MovingRx(_) => Scenario::MovingRx,
            Command::InterferenceValidation(_) => Scenario::InterferenceValidation,
            Command::PowerComparison(_) => Scenario::PowerComparison,
        }
    }

    fn opts(&self) -> &CommonOpts {
        match self {
            Command::RisSizeSweep(o)
            | Command::MovingRx(o)
            | Command::InterferenceValidation(o)
            | Command::PowerComparison(o) => o,
        }
    }
}

fn resolve_config(cmd: &Command) -> Result<ExperimentConfig, ConfigError> {
    let scenario = cmd.scenario();
    let opts = cmd.opts();
    let mut cfg = match &opts.config {
        Some(path) => load_config(path, scenario)?,
        None => ExperimentConfig::defaults(scenario),
    };
    if opts.paper_scale {
        cfg.apply_paper_scale();
    }
    if let Some(seed) = opts.seed {
        cfg.master_seed = seed;
    }
    if let Some(n) = opts.realizations {
        cfg.n_realizations = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cmd: &Command) -> Result<(), ConfigError> {
    let cfg = resolve_config(cmd)?;
    let table: ResultTable = match cmd {
        Command::RisSizeSweep(_) => run_ris_size_sweep(&cfg)?,
        Command::MovingRx(_) => run_moving_rx(&cfg)?,
        Command::InterferenceValidation(_) => run_interference_validation(&cfg)?,
        Command::PowerComparison(_) => run_power_comparison(&cfg)?,
    };
    let out = cmd.opts().out.clone().unwrap_or_else(|| {
        PathBuf::from(format!("results/{}.csv", cfg.scenario.name()))
    });
    table.write(&out)?;
    eprintln!(
        "{}: {} rows -> {} ({:.2} s)",
        cfg.scenario.name(),
        table.rows.len(),
        out.display(),
        table.metadata.wall_time_s
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
