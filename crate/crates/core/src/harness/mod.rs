//! Experiment orchestration: MSE curves, the optimal-alpha sweep, and the
//! Monte Carlo throughput comparison, each emitted as a deterministic CSV.
//!
//! Cells of the (regime × delay × seed) grid are independent jobs with their
//! own RNG streams; results are collected in grid order and aggregated
//! sequentially, so output bytes do not depend on the degree of parallelism.

mod config;

pub use config::{
    AlphaGrid, AlphaSelection, AnalyticTag, ExperimentConfig, RegimeChoice, StrategyKind,
};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fading::{generate_trace, make_schedule, power_trace, DopplerSpec, Regime};
use crate::linkadapt::{
    adapt_and_evaluate, evaluate_block, fixed_rate_index, throughput, BlockOutcome, McsTable,
    ThroughputWeighting,
};
use crate::predictor::{default_warmup, PredictorState};
use crate::theory::{alpha_opt_with_corr_sq, mean_rho_sq, mse_with_corr_sq, rho_fixed, MseCurve};

/// One (regime, delay, alpha) grid point of the MSE experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MseCurveRow {
    pub regime: Regime,
    pub delay_s: f64,
    pub alpha: f64,
    pub mse_analytic: f64,
    pub mse_empirical: f64,
    pub variance_floor: f64,
}

/// Analytic minimum marker for one (regime, delay) curve.
#[derive(Debug, Clone, PartialEq)]
pub struct MseMinimumRow {
    pub regime: Regime,
    pub delay_s: f64,
    pub alpha_opt: f64,
    pub mse_min: f64,
}

/// One (regime, doppler, delay) point of the optimal-alpha sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaOptRow {
    pub regime: Regime,
    pub fd_hz: f64,
    pub delay_s: f64,
    pub alpha_opt: f64,
    /// Finite-difference |d alpha_opt / d delay| in 1/s.
    pub sensitivity: f64,
}

/// One (regime, delay, strategy) cell of the throughput experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputRow {
    pub regime: Regime,
    pub delay_s: f64,
    pub strategy: StrategyKind,
    pub throughput_mean: f64,
    /// Normal-approximation 95% half-width across seeds.
    pub ci_half_width: f64,
}

/// Output of the MSE experiment: paired analytic/empirical curves per
/// (regime, delay), plus the analytic minimum markers.
#[derive(Debug, Clone)]
pub struct MseCurvesOutput {
    pub analytic: Vec<MseCurve>,
    pub empirical: Vec<MseCurve>,
    pub minima: Vec<MseMinimumRow>,
}

impl MseCurvesOutput {
    /// Flatten the paired curves into CSV rows.
    pub fn rows(&self) -> Vec<MseCurveRow> {
        let mut rows = Vec::new();
        for (analytic, empirical) in self.analytic.iter().zip(&self.empirical) {
            for (i, &alpha) in analytic.alphas.iter().enumerate() {
                rows.push(MseCurveRow {
                    regime: analytic.regime,
                    delay_s: analytic.delay_s,
                    alpha,
                    mse_analytic: analytic.mse_values[i],
                    mse_empirical: empirical.mse_values[i],
                    variance_floor: analytic.variance_floor(),
                });
            }
        }
        rows
    }
}

/// Squared lag-1 correlation entering the shared MSE kernel for a cell.
fn cell_corr_sq(regime: Regime, doppler: DopplerSpec, delay_s: f64) -> Result<f64> {
    match regime {
        Regime::Fixed => Ok(rho_fixed(doppler, delay_s)?.powi(2)),
        Regime::Random => mean_rho_sq(doppler, delay_s),
    }
}

/// Analytic optimum for a cell, clipped to [0, 1].
fn cell_alpha_opt(regime: Regime, doppler: DopplerSpec, delay_s: f64) -> Result<f64> {
    Ok(alpha_opt_with_corr_sq(cell_corr_sq(
        regime, doppler, delay_s,
    )?))
}

/// Empirical MSE of the smoother at several alphas over one generated trace.
/// The strictly causal prediction stream is folded without materializing the
/// prediction vectors; the per-alpha warmup is discarded.
fn empirical_mse_cell(
    regime: Regime,
    delay_s: f64,
    doppler: DopplerSpec,
    snr: f64,
    blocks: usize,
    seed: u64,
    alphas: &[f64],
) -> Result<Vec<f64>> {
    let schedule = make_schedule(regime, delay_s, blocks, seed)?;
    let trace = generate_trace(schedule, doppler, seed);
    let powers = power_trace(&trace, snr)?;

    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let warmup = default_warmup(alpha).min(blocks / 2);
        let mut state = PredictorState::new(alpha, snr)?;
        let mut acc = 0.0;
        let mut n = 0usize;
        for (l, &gamma) in powers.powers().iter().enumerate() {
            let prediction = state.prediction();
            if l >= warmup {
                let e = prediction - gamma;
                acc += e * e;
                n += 1;
            }
            state.advance(gamma);
        }
        out.push(acc / n as f64);
    }
    Ok(out)
}

/// Analytic and Monte Carlo MSE curves for every configured (regime, delay).
pub fn run_mse_curves(config: &ExperimentConfig) -> Result<MseCurvesOutput> {
    config.validate()?;
    let doppler = config.doppler()?;
    let snr = config.snr_linear(0.0);
    let blocks = config.blocks;

    let mut analytic = Vec::new();
    let mut empirical = Vec::new();
    let mut minima = Vec::new();

    for regime in config.regimes() {
        for &delay_s in &config.delays_s() {
            let corr_sq = cell_corr_sq(regime, doppler, delay_s)?;
            let alpha_opt = alpha_opt_with_corr_sq(corr_sq);
            // A clipped optimum means the constant mean predictor; its MSE is
            // the variance floor, approached as alpha -> 0.
            let mse_min = if alpha_opt > 0.0 {
                mse_with_corr_sq(alpha_opt, corr_sq, snr)?
            } else {
                snr * snr
            };
            minima.push(MseMinimumRow {
                regime,
                delay_s,
                alpha_opt,
                mse_min,
            });

            let alphas = match config.alpha {
                AlphaSelection::Grid(g) => g.values(),
                // The clipped optimum is represented by the smallest usable
                // grid value.
                AlphaSelection::Analytic(_) => vec![alpha_opt.max(1e-6)],
            };

            let analytic_values = alphas
                .iter()
                .map(|&a| mse_with_corr_sq(a, corr_sq, snr))
                .collect::<Result<Vec<f64>>>()?;

            let per_seed: Vec<Vec<f64>> = config
                .seeds
                .par_iter()
                .map(|&seed| {
                    empirical_mse_cell(regime, delay_s, doppler, snr, blocks, seed, &alphas)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut empirical_values = vec![0.0; alphas.len()];
            for cell in &per_seed {
                for (acc, v) in empirical_values.iter_mut().zip(cell) {
                    *acc += v;
                }
            }
            for v in &mut empirical_values {
                *v /= per_seed.len() as f64;
            }

            analytic.push(MseCurve::new(
                regime,
                delay_s,
                snr,
                alphas.clone(),
                analytic_values,
            )?);
            empirical.push(MseCurve::new(
                regime,
                delay_s,
                snr,
                alphas,
                empirical_values,
            )?);
        }
    }

    Ok(MseCurvesOutput {
        analytic,
        empirical,
        minima,
    })
}

/// Clipped analytic optimum per (regime, doppler, delay), with a
/// finite-difference sensitivity to the delay.
pub fn run_alpha_opt_sweep(config: &ExperimentConfig) -> Result<Vec<AlphaOptRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for regime in config.regimes() {
        for &speed_kmh in &config.sweep_speeds_kmh {
            let doppler = DopplerSpec::from_kmh(speed_kmh, config.carrier_hz)?;
            for &delay_s in &config.sweep_delays_s() {
                let alpha_opt = cell_alpha_opt(regime, doppler, delay_s)?;
                let h = 1e-3 * delay_s;
                let up = cell_alpha_opt(regime, doppler, delay_s + h)?;
                let down = cell_alpha_opt(regime, doppler, delay_s - h)?;
                rows.push(AlphaOptRow {
                    regime,
                    fd_hz: doppler.doppler_hz(),
                    delay_s,
                    alpha_opt,
                    sensitivity: ((up - down) / (2.0 * h)).abs(),
                });
            }
        }
    }
    Ok(rows)
}

/// Per-seed throughput of every configured strategy on one shared trace.
#[allow(clippy::too_many_arguments)]
fn throughput_cell(
    regime: Regime,
    delay_s: f64,
    doppler: DopplerSpec,
    snr: f64,
    blocks: usize,
    seed: u64,
    alpha_opt: f64,
    fixed_rate_entry: usize,
    table: &McsTable,
    weighting: ThroughputWeighting,
    strategies: &[StrategyKind],
) -> Result<Vec<f64>> {
    let schedule = make_schedule(regime, delay_s, blocks, seed)?;
    let trace = generate_trace(schedule, doppler, seed);
    let powers = power_trace(&trace, snr)?;
    let gammas = powers.powers();

    let mut values = Vec::with_capacity(strategies.len());
    for &strategy in strategies {
        let outcomes: Vec<BlockOutcome> = match strategy {
            StrategyKind::FixedRate => gammas
                .iter()
                .map(|&g| evaluate_block(g, fixed_rate_entry, table))
                .collect::<Result<_>>()?,
            StrategyKind::PerfectPrediction => gammas
                .iter()
                .map(|&g| adapt_and_evaluate(g, g, table))
                .collect::<Result<_>>()?,
            _ => {
                let alpha = match strategy {
                    StrategyKind::IirOptimalAlpha => alpha_opt,
                    StrategyKind::IirFixedAlpha(a) => a,
                    StrategyKind::PreviousSample => 1.0,
                    _ => unreachable!(),
                };
                // Initialized at the process mean E[gamma] = snr.
                let mut state = PredictorState::new(alpha, snr)?;
                let mut outcomes = Vec::with_capacity(gammas.len());
                for &gamma in gammas {
                    outcomes.push(adapt_and_evaluate(state.prediction(), gamma, table)?);
                    state.advance(gamma);
                }
                outcomes
            }
        };
        values.push(throughput(&outcomes, weighting, trace.schedule())?);
    }
    Ok(values)
}

/// Monte Carlo throughput comparison across strategies and delays.
pub fn run_throughput(config: &ExperimentConfig) -> Result<Vec<ThroughputRow>> {
    config.validate()?;
    let doppler = config.doppler()?;
    let snr = config.snr_linear(5.0);
    let table = config.mcs()?;
    let fixed_rate_entry = fixed_rate_index(snr, &table, config.fixed_rate_convention)?;

    let mut rows = Vec::new();
    for regime in config.regimes() {
        for &delay_s in &config.delays_s() {
            let alpha_opt = cell_alpha_opt(regime, doppler, delay_s)?;
            let per_seed: Vec<Vec<f64>> = config
                .seeds
                .par_iter()
                .map(|&seed| {
                    throughput_cell(
                        regime,
                        delay_s,
                        doppler,
                        snr,
                        config.blocks,
                        seed,
                        alpha_opt,
                        fixed_rate_entry,
                        &table,
                        config.throughput_weighting,
                        &config.strategies,
                    )
                })
                .collect::<Result<Vec<_>>>()?;

            let n = per_seed.len() as f64;
            for (k, &strategy) in config.strategies.iter().enumerate() {
                let mean = per_seed.iter().map(|v| v[k]).sum::<f64>() / n;
                let ci_half_width = if per_seed.len() > 1 {
                    let var =
                        per_seed.iter().map(|v| (v[k] - mean).powi(2)).sum::<f64>() / (n - 1.0);
                    1.96 * (var / n).sqrt()
                } else {
                    0.0
                };
                rows.push(ThroughputRow {
                    regime,
                    delay_s,
                    strategy,
                    throughput_mean: mean,
                    ci_half_width,
                });
            }
        }
    }
    Ok(rows)
}

/// One row type per experiment CSV. Floats are written with Rust's shortest
/// round-trip formatting, so re-running a configuration reproduces the file
/// byte for byte.
pub trait CsvRecord {
    const HEADER: &'static str;
    fn write_row<W: Write>(&self, w: &mut W) -> std::io::Result<()>;
}

impl CsvRecord for MseCurveRow {
    const HEADER: &'static str = "regime,delay_s,alpha,mse_analytic,mse_empirical,variance_floor";

    fn write_row<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            self.regime,
            self.delay_s,
            self.alpha,
            self.mse_analytic,
            self.mse_empirical,
            self.variance_floor
        )
    }
}

impl CsvRecord for MseMinimumRow {
    const HEADER: &'static str = "regime,delay_s,alpha_opt,mse_min";

    fn write_row<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{},{}",
            self.regime, self.delay_s, self.alpha_opt, self.mse_min
        )
    }
}

impl CsvRecord for AlphaOptRow {
    const HEADER: &'static str = "regime,fd_hz,delay_s,alpha_opt,sensitivity";

    fn write_row<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{},{},{}",
            self.regime, self.fd_hz, self.delay_s, self.alpha_opt, self.sensitivity
        )
    }
}

impl CsvRecord for ThroughputRow {
    const HEADER: &'static str = "regime,delay_s,strategy,throughput_mean,ci_half_width";

    fn write_row<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{},{},{}",
            self.regime, self.delay_s, self.strategy, self.throughput_mean, self.ci_half_width
        )
    }
}

/// Write rows to a CSV file: one header line, then rows in input order.
/// An empty result set produces a header-only file.
pub fn emit_csv<T: CsvRecord>(rows: &[T], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", T::HEADER).map_err(|e| Error::io(path, e))?;
    for row in rows {
        row.write_row(&mut w).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
