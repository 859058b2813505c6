//! Command-line front end: runs the experiments and writes their CSV
//! artifacts. Configuration comes from an optional TOML file with flag
//! overrides on top; outputs are a pure function of (config, seeds).

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use chanpred::harness::{
    emit_csv, run_alpha_opt_sweep, run_mse_curves, run_throughput, AlphaGrid, AlphaSelection,
    ExperimentConfig, RegimeChoice, StrategyKind,
};
use chanpred::linkadapt::{FixedRateConvention, ThroughputWeighting};

#[derive(Parser)]
#[command(
    name = "chanpred",
    version,
    about = "Channel-power prediction under fixed and random feedback delays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Base seed: replaces the seed list with [seed, seed+1, ...] of the
    /// configured length.
    #[arg(long)]
    seed: Option<u64>,

    /// Explicit comma-separated seed list (overrides --seed).
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,

    /// Blocks per Monte Carlo cell.
    #[arg(long)]
    blocks: Option<usize>,

    /// Output directory for CSV artifacts.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,

    /// Delay regime(s) to run.
    #[arg(long, value_enum)]
    regime: Option<RegimeChoice>,

    /// SNR in dB (defaults: 0 dB for MSE curves, 5 dB for throughput).
    #[arg(long)]
    snr_db: Option<f64>,

    /// Comma-separated delay grid in ms.
    #[arg(long, value_delimiter = ',')]
    delays_ms: Option<Vec<f64>>,

    /// Terminal speed in km/h.
    #[arg(long)]
    speed_kmh: Option<f64>,

    /// Doppler bandwidth in Hz (overrides --speed-kmh).
    #[arg(long)]
    doppler_hz: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic and Monte Carlo MSE curves over the alpha grid, per delay.
    MseCurves {
        #[command(flatten)]
        common: CommonOpts,

        /// Number of alpha grid points.
        #[arg(long)]
        alpha_points: Option<usize>,

        /// Lower end of the alpha grid (exclusive of 0).
        #[arg(long)]
        alpha_min: Option<f64>,

        /// Upper end of the alpha grid (below 2).
        #[arg(long)]
        alpha_max: Option<f64>,

        /// Evaluate only at the analytic optimum instead of a grid.
        #[arg(long, conflicts_with_all = ["alpha_points", "alpha_min", "alpha_max"])]
        analytic: bool,
    },

    /// Optimal smoothing parameter versus delay for several speeds.
    AlphaOpt {
        #[command(flatten)]
        common: CommonOpts,

        /// Comma-separated speed grid in km/h.
        #[arg(long, value_delimiter = ',')]
        sweep_speeds_kmh: Option<Vec<f64>>,

        /// Comma-separated delay grid in ms.
        #[arg(long, value_delimiter = ',')]
        sweep_delays_ms: Option<Vec<f64>>,
    },

    /// Monte Carlo adaptive-MCS throughput comparison across strategies.
    Throughput {
        #[command(flatten)]
        common: CommonOpts,

        /// Comma-separated strategies (iir_optimal_alpha, iir_fixed_alpha:<a>,
        /// previous_sample, perfect_prediction, fixed_rate).
        #[arg(long, value_delimiter = ',')]
        strategies: Option<Vec<String>>,

        /// MCS table CSV (threshold_db,rate_bps_hz); built-in ladder if unset.
        #[arg(long)]
        mcs_table: Option<PathBuf>,

        /// Throughput aggregation: per_time or per_block.
        #[arg(long, value_enum)]
        weighting: Option<ThroughputWeighting>,

        /// Success model for the fixed-rate baseline: rayleigh or paper.
        #[arg(long, value_enum)]
        convention: Option<FixedRateConvention>,
    },

    /// Run all experiments with their defaults into one output directory.
    ReproduceAll {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn load_config(common: &CommonOpts) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::from_toml_path(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        let n = config.seeds.len() as u64;
        config.seeds = (seed..seed + n).collect();
    }
    if let Some(seeds) = &common.seeds {
        config.seeds = seeds.clone();
    }
    if let Some(blocks) = common.blocks {
        config.blocks = blocks;
    }
    if let Some(regime) = common.regime {
        config.regime = regime;
    }
    if common.snr_db.is_some() {
        config.snr_db = common.snr_db;
    }
    if let Some(delays) = &common.delays_ms {
        config.delays_ms = delays.clone();
    }
    if let Some(speed) = common.speed_kmh {
        config.speed_kmh = speed;
        config.doppler_hz = None;
    }
    if common.doppler_hz.is_some() {
        config.doppler_hz = common.doppler_hz;
    }
    Ok(config)
}

fn ensure_out_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))
}

fn report(path: &Path, rows: usize) {
    println!("wrote {} ({} rows)", path.display(), rows);
}

fn cmd_mse_curves(config: &ExperimentConfig, out_dir: &Path) -> anyhow::Result<()> {
    let out = run_mse_curves(config)?;
    let rows = out.rows();
    let curves_path = out_dir.join("mse_curves.csv");
    emit_csv(&rows, &curves_path)?;
    report(&curves_path, rows.len());
    let minima_path = out_dir.join("mse_minima.csv");
    emit_csv(&out.minima, &minima_path)?;
    report(&minima_path, out.minima.len());
    Ok(())
}

fn cmd_alpha_opt(config: &ExperimentConfig, out_dir: &Path) -> anyhow::Result<()> {
    let rows = run_alpha_opt_sweep(config)?;
    let path = out_dir.join("alpha_opt.csv");
    emit_csv(&rows, &path)?;
    report(&path, rows.len());
    Ok(())
}

fn cmd_throughput(config: &ExperimentConfig, out_dir: &Path) -> anyhow::Result<()> {
    let rows = run_throughput(config)?;
    let path = out_dir.join("throughput.csv");
    emit_csv(&rows, &path)?;
    report(&path, rows.len());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::MseCurves {
            common,
            alpha_points,
            alpha_min,
            alpha_max,
            analytic,
        } => {
            let mut config = load_config(&common)?;
            if analytic {
                config.alpha = AlphaSelection::Analytic(chanpred::harness::AnalyticTag::Analytic);
            } else if alpha_points.is_some() || alpha_min.is_some() || alpha_max.is_some() {
                let base = config.alpha.grid().unwrap_or(AlphaGrid {
                    count: 40,
                    min: 0.02,
                    max: 1.4,
                });
                config.alpha = AlphaSelection::Grid(AlphaGrid {
                    count: alpha_points.unwrap_or(base.count),
                    min: alpha_min.unwrap_or(base.min),
                    max: alpha_max.unwrap_or(base.max),
                });
            }
            config.validate()?;
            ensure_out_dir(&common.out_dir)?;
            cmd_mse_curves(&config, &common.out_dir)
        }
        Command::AlphaOpt {
            common,
            sweep_speeds_kmh,
            sweep_delays_ms,
        } => {
            let mut config = load_config(&common)?;
            if let Some(speeds) = sweep_speeds_kmh {
                config.sweep_speeds_kmh = speeds;
            }
            if let Some(delays) = sweep_delays_ms {
                config.sweep_delays_ms = delays;
            }
            config.validate()?;
            ensure_out_dir(&common.out_dir)?;
            cmd_alpha_opt(&config, &common.out_dir)
        }
        Command::Throughput {
            common,
            strategies,
            mcs_table,
            weighting,
            convention,
        } => {
            let mut config = load_config(&common)?;
            if let Some(names) = strategies {
                config.strategies = names
                    .iter()
                    .map(|s| s.parse::<StrategyKind>())
                    .collect::<chanpred::Result<Vec<_>>>()?;
            }
            if mcs_table.is_some() {
                config.mcs_table = mcs_table;
            }
            if let Some(w) = weighting {
                config.throughput_weighting = w;
            }
            if let Some(c) = convention {
                config.fixed_rate_convention = c;
            }
            config.validate()?;
            ensure_out_dir(&common.out_dir)?;
            cmd_throughput(&config, &common.out_dir)
        }
        Command::ReproduceAll { common } => {
            let config = load_config(&common)?;
            config.validate()?;
            ensure_out_dir(&common.out_dir)?;
            // MSE curves at their conventional 0 dB unless overridden.
            cmd_mse_curves(&config, &common.out_dir)?;
            cmd_alpha_opt(&config, &common.out_dir)?;
            // Throughput defaults to 5 dB via the runner when snr_db is unset.
            cmd_throughput(&config, &common.out_dir)?;
            Ok(())
        }
    }
}
