//! `insperc`: sweeps, closed-form reports, regime classification and lattice
//! threshold checks.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical divergence,
//! 4 I/O failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use insider_percolation::config::{
    OutputFormat, RunConfig, DEFAULT_GRID_POINTS, DEFAULT_LATTICE_SIZE, DEFAULT_LATTICE_TRIALS,
    DEFAULT_SPACING_N, DEFAULT_SPACING_TRIALS,
};
use insider_percolation::lattice::{threshold_report, ThresholdReport};
use insider_percolation::{montecarlo, output, regime, Error};

#[derive(Parser, Debug)]
#[command(
    name = "insperc",
    version,
    about = "Rule-count model of insider-threat latitude and site percolation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate mean normal and threat latitude for N = 1..n_max.
    Sweep {
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        l_min: Option<f64>,
        /// Fresh boundaries for every N instead of reusing one draw per trial.
        #[arg(long)]
        independent: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form threat latitude, percolation prediction and regime.
    Exact {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        l_min: Option<f64>,
        #[command(flatten)]
        cutoffs: Cutoffs,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate site percolation thresholds and compare with published values.
    LatticeThreshold {
        /// Lattice kind, repeatable: linear-1d, square-2d, triangular-2d,
        /// honeycomb-2d, simple-cubic-3d, hypercubic-4d..7d, bethe.
        #[arg(long)]
        geometry: Vec<String>,
        /// Side length of grid lattices.
        #[arg(long)]
        size: Option<usize>,
        /// Coordination for a bare `bethe` geometry.
        #[arg(long)]
        z: Option<u32>,
        /// Trials per bisection step.
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Classify an environment into a regulation regime.
    Classify {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        l_min: Option<f64>,
        #[command(flatten)]
        cutoffs: Cutoffs,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical latitude CDF against the exponential spacing law.
    SpacingCdf {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        grid_points: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// TOML config file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core. Does not change results.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Save the merged configuration as TOML.
    #[arg(long)]
    write_config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Cutoffs {
    #[arg(long)]
    cutoff_possibly_optimal: Option<f64>,
    #[arg(long)]
    cutoff_tipping_point: Option<f64>,
    #[arg(long)]
    cutoff_over_regulated: Option<f64>,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(Error::Divergence(_) | Error::NonConvergence { .. }) => 3,
            CliError::Model(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}

fn io_err(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}

impl Common {
    fn overrides(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            threads: self.threads,
            format: self.format,
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

impl Cutoffs {
    fn apply(&self, c: &mut RunConfig) {
        c.cutoff_possibly_optimal = self.cutoff_possibly_optimal;
        c.cutoff_tipping_point = self.cutoff_tipping_point;
        c.cutoff_over_regulated = self.cutoff_over_regulated;
    }
}

/// Command name, merged config and the `--write-config` target.
fn resolve(command: &Command) -> Result<(&'static str, RunConfig, Option<PathBuf>), CliError> {
    let (name, common, mut flags) = match command {
        Command::Sweep {
            trials,
            n_max,
            l_min,
            independent,
            common,
        } => {
            let mut c = common.overrides();
            c.trials = *trials;
            c.n_max = *n_max;
            c.l_min = *l_min;
            c.incremental = independent.then_some(false);
            ("sweep", common, c)
        }
        Command::Exact {
            n,
            l_min,
            cutoffs,
            common,
        }
        | Command::Classify {
            n,
            l_min,
            cutoffs,
            common,
        } => {
            let mut c = common.overrides();
            c.n = *n;
            c.l_min = *l_min;
            cutoffs.apply(&mut c);
            let name = if matches!(command, Command::Exact { .. }) {
                "exact"
            } else {
                "classify"
            };
            (name, common, c)
        }
        Command::LatticeThreshold {
            geometry,
            size,
            z,
            trials,
            common,
        } => {
            let mut c = common.overrides();
            c.geometry = (!geometry.is_empty()).then(|| geometry.clone());
            c.size = *size;
            c.z = *z;
            c.trials = *trials;
            ("lattice-threshold", common, c)
        }
        Command::SpacingCdf {
            n,
            trials,
            grid_points,
            common,
        } => {
            let mut c = common.overrides();
            c.n = *n;
            c.trials = *trials;
            c.grid_points = *grid_points;
            ("spacing-cdf", common, c)
        }
    };
    if let Some(path) = &common.config {
        let file = RunConfig::load(path).map_err(io_err(path.display().to_string()))??;
        flags = file.merged_with(&flags);
    }
    Ok((name, flags, common.write_config.clone()))
}

fn required_n(c: &RunConfig) -> Result<u64, Error> {
    c.n.ok_or_else(|| Error::Config("--n (rule count) is required".into()))
}

fn run_command(name: &str, cfg: &RunConfig) -> Result<String, CliError> {
    let rendered = match name {
        "sweep" => {
            let sim = cfg.simulation()?;
            let echo = RunConfig {
                trials: Some(sim.n_trials),
                n_max: Some(sim.n_rules_max),
                l_min: Some(sim.l_min.get()),
                seed: Some(sim.master_seed),
                incremental: Some(sim.incremental),
                ..cfg.echo()
            };
            let result = montecarlo::run_sweep(&sim)?;
            output::render_sweep(&result, &echo, cfg.format.unwrap_or(OutputFormat::Csv))?
        }
        "exact" => {
            let n = required_n(cfg)?;
            let echo = RunConfig {
                n: Some(n),
                l_min: Some(cfg.l_min()),
                ..cfg.echo()
            };
            let report = output::exact_report(n, cfg.l_min(), &cfg.cutoffs()?)?;
            output::render_exact(&report, &echo, cfg.format.unwrap_or(OutputFormat::Text))?
        }
        "classify" => {
            let n = required_n(cfg)?;
            let echo = RunConfig {
                n: Some(n),
                l_min: Some(cfg.l_min()),
                ..cfg.echo()
            };
            let report = regime::classify_with(n, cfg.l_min(), &cfg.cutoffs()?)?;
            output::render_regime(&report, &echo, cfg.format.unwrap_or(OutputFormat::Text))?
        }
        "lattice-threshold" => {
            let trials = cfg.trials.unwrap_or(DEFAULT_LATTICE_TRIALS);
            let geometries = cfg.geometries()?;
            let reports = geometries
                .iter()
                .map(|g| threshold_report(g, trials, cfg.seed()))
                .collect::<Result<Vec<ThresholdReport>, Error>>()?;
            let echo = RunConfig {
                trials: Some(trials),
                seed: Some(cfg.seed()),
                geometry: Some(geometries.iter().map(|g| g.kind.to_string()).collect()),
                size: Some(cfg.size.unwrap_or(DEFAULT_LATTICE_SIZE)),
                z: None,
                ..cfg.echo()
            };
            output::render_thresholds(&reports, &echo, cfg.format.unwrap_or(OutputFormat::Csv))?
        }
        "spacing-cdf" => {
            let n = cfg.n.unwrap_or(DEFAULT_SPACING_N as u64);
            let trials = cfg.trials.unwrap_or(DEFAULT_SPACING_TRIALS);
            let grid = cfg.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
            let hist = montecarlo::spacing_distribution(n as usize, trials, cfg.seed())?;
            let echo = RunConfig {
                n: Some(n),
                trials: Some(trials),
                grid_points: Some(grid),
                seed: Some(cfg.seed()),
                ..cfg.echo()
            };
            output::render_spacing(&hist, grid, &echo, cfg.format.unwrap_or(OutputFormat::Csv))?
        }
        other => unreachable!("unknown command {other}"),
    };
    Ok(rendered)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, cfg, write_config) = resolve(&cli.command)?;
    if let Some(path) = write_config {
        std::fs::write(&path, cfg.to_toml_string()?).map_err(io_err(path.display().to_string()))?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rendered = pool.install(|| run_command(name, &cfg))?;

    match &cfg.out {
        Some(path) => std::fs::write(path, rendered).map_err(io_err(path.display().to_string()))?,
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(io_err("<stdout>"))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("insperc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
