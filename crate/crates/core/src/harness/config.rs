//! Experiment configuration: a TOML-loadable struct with CLI-friendly
//! overrides, covering every knob the runners need.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fading::{DopplerSpec, Regime};
use crate::linkadapt::{FixedRateConvention, McsTable, ThroughputWeighting};

/// Which delay regimes a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum RegimeChoice {
    Fixed,
    Random,
    Both,
}

impl RegimeChoice {
    pub fn regimes(self) -> Vec<Regime> {
        match self {
            RegimeChoice::Fixed => vec![Regime::Fixed],
            RegimeChoice::Random => vec![Regime::Random],
            RegimeChoice::Both => vec![Regime::Fixed, Regime::Random],
        }
    }
}

/// Smoothing-parameter grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaGrid {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl AlphaGrid {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.min + step * i as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticTag {
    Analytic,
}

/// Either an explicit alpha grid or the per-delay analytic optimum.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AlphaSelection {
    Analytic(AnalyticTag),
    Grid(AlphaGrid),
}

impl AlphaSelection {
    pub fn grid(self) -> Option<AlphaGrid> {
        match self {
            AlphaSelection::Grid(g) => Some(g),
            AlphaSelection::Analytic(_) => None,
        }
    }
}

/// Prediction strategy driving MCS selection.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "String")]
pub enum StrategyKind {
    /// Smoother with the analytic optimal alpha for the cell's regime/delay.
    IirOptimalAlpha,
    /// Smoother with a fixed alpha in [0, 2).
    IirFixedAlpha(f64),
    /// The previous power sample (identical to `IirFixedAlpha(1.0)`).
    PreviousSample,
    /// Oracle upper bound: the true power of the block being scheduled.
    PerfectPrediction,
    /// One static MCS maximizing expected throughput; never adapted.
    FixedRate,
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iir_optimal_alpha" => Ok(StrategyKind::IirOptimalAlpha),
            "previous_sample" => Ok(StrategyKind::PreviousSample),
            "perfect_prediction" => Ok(StrategyKind::PerfectPrediction),
            "fixed_rate" => Ok(StrategyKind::FixedRate),
            other => {
                if let Some(alpha) = other.strip_prefix("iir_fixed_alpha:") {
                    let alpha: f64 = alpha.parse().map_err(|e| {
                        Error::config(format!("strategy '{other}': bad alpha: {e}"))
                    })?;
                    if !(alpha.is_finite() && (0.0..2.0).contains(&alpha)) {
                        return Err(Error::config(format!(
                            "strategy '{other}': alpha must lie in [0, 2)"
                        )));
                    }
                    Ok(StrategyKind::IirFixedAlpha(alpha))
                } else {
                    Err(Error::config(format!(
                        "unknown strategy '{other}' (expected iir_optimal_alpha, \
                         iir_fixed_alpha:<a>, previous_sample, perfect_prediction, fixed_rate)"
                    )))
                }
            }
        }
    }
}

impl TryFrom<String> for StrategyKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::IirOptimalAlpha => write!(f, "iir_optimal_alpha"),
            StrategyKind::IirFixedAlpha(a) => write!(f, "iir_fixed_alpha:{a}"),
            StrategyKind::PreviousSample => write!(f, "previous_sample"),
            StrategyKind::PerfectPrediction => write!(f, "perfect_prediction"),
            StrategyKind::FixedRate => write!(f, "fixed_rate"),
        }
    }
}

/// Full experiment description. Loadable from TOML; every field has a
/// desk-scale default.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Terminal speed, km/h (with `carrier_hz`, fixes the Doppler bandwidth).
    pub speed_kmh: f64,
    pub carrier_hz: f64,
    /// Doppler bandwidth in Hz; overrides speed/carrier when set.
    pub doppler_hz: Option<f64>,
    /// SNR in dB; when unset, runners use their conventional default
    /// (0 dB for MSE curves, 5 dB for throughput).
    pub snr_db: Option<f64>,
    pub regime: RegimeChoice,
    /// Delay grid in ms: T_s for the fixed regime, T̄ for the random one.
    pub delays_ms: Vec<f64>,
    pub alpha: AlphaSelection,
    /// Blocks per Monte Carlo cell.
    pub blocks: usize,
    /// One Monte Carlo cell per seed; confidence intervals run across seeds.
    pub seeds: Vec<u64>,
    /// Path to an MCS table CSV; the built-in ladder when unset.
    pub mcs_table: Option<PathBuf>,
    pub strategies: Vec<StrategyKind>,
    /// Speed grid for the optimal-alpha sweep, km/h.
    pub sweep_speeds_kmh: Vec<f64>,
    /// Delay grid for the optimal-alpha sweep, ms.
    pub sweep_delays_ms: Vec<f64>,
    pub fixed_rate_convention: FixedRateConvention,
    pub throughput_weighting: ThroughputWeighting,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            speed_kmh: 3.0,
            carrier_hz: 2.0e9,
            doppler_hz: None,
            snr_db: None,
            regime: RegimeChoice::Both,
            delays_ms: vec![10.0, 20.0, 30.0, 40.0],
            alpha: AlphaSelection::Grid(AlphaGrid {
                count: 40,
                min: 0.02,
                max: 1.4,
            }),
            blocks: 200_000,
            seeds: (1..=8).collect(),
            mcs_table: None,
            strategies: vec![
                StrategyKind::PerfectPrediction,
                StrategyKind::IirOptimalAlpha,
                StrategyKind::PreviousSample,
                StrategyKind::FixedRate,
            ],
            sweep_speeds_kmh: vec![3.0, 10.0, 20.0, 30.0],
            sweep_delays_ms: vec![5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0],
            fixed_rate_convention: FixedRateConvention::Rayleigh,
            throughput_weighting: ThroughputWeighting::PerTime,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.speed_kmh.is_finite() && self.speed_kmh >= 0.0) {
            return Err(Error::config(format!(
                "speed_kmh must be >= 0, got {}",
                self.speed_kmh
            )));
        }
        if !(self.carrier_hz.is_finite() && self.carrier_hz > 0.0) {
            return Err(Error::config(format!(
                "carrier_hz must be positive, got {}",
                self.carrier_hz
            )));
        }
        if let Some(fd) = self.doppler_hz {
            if !(fd.is_finite() && fd >= 0.0) {
                return Err(Error::config(format!("doppler_hz must be >= 0, got {fd}")));
            }
        }
        if let Some(snr) = self.snr_db {
            if !snr.is_finite() {
                return Err(Error::config(format!("snr_db must be finite, got {snr}")));
            }
        }
        if self.delays_ms.is_empty() || self.delays_ms.iter().any(|&d| !(d.is_finite() && d > 0.0))
        {
            return Err(Error::config(format!(
                "delays_ms must be a non-empty list of positive values, got {:?}",
                self.delays_ms
            )));
        }
        if let AlphaSelection::Grid(g) = self.alpha {
            if g.count < 2 {
                return Err(Error::config(format!(
                    "alpha grid needs >= 2 points, got {}",
                    g.count
                )));
            }
            if !(g.min > 0.0 && g.min < g.max && g.max < 2.0) {
                return Err(Error::config(format!(
                    "alpha grid must satisfy 0 < min < max < 2, got [{}, {}]",
                    g.min, g.max
                )));
            }
        }
        if self.blocks < 10_000 {
            return Err(Error::config(format!(
                "blocks must be >= 10000 for stable statistics, got {}",
                self.blocks
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds must be non-empty".to_string()));
        }
        if self.strategies.is_empty() {
            return Err(Error::config("strategies must be non-empty".to_string()));
        }
        if self.sweep_speeds_kmh.is_empty()
            || self
                .sweep_speeds_kmh
                .iter()
                .any(|&v| !(v.is_finite() && v > 0.0))
        {
            return Err(Error::config(format!(
                "sweep_speeds_kmh must be a non-empty list of positive values, got {:?}",
                self.sweep_speeds_kmh
            )));
        }
        if self.sweep_delays_ms.is_empty()
            || self
                .sweep_delays_ms
                .iter()
                .any(|&d| !(d.is_finite() && d > 0.0))
        {
            return Err(Error::config(format!(
                "sweep_delays_ms must be a non-empty list of positive values, got {:?}",
                self.sweep_delays_ms
            )));
        }
        Ok(())
    }

    pub fn doppler(&self) -> Result<DopplerSpec> {
        match self.doppler_hz {
            Some(fd) => DopplerSpec::from_doppler(fd),
            None => DopplerSpec::from_kmh(self.speed_kmh, self.carrier_hz),
        }
    }

    pub fn snr_linear(&self, default_db: f64) -> f64 {
        10.0_f64.powf(self.snr_db.unwrap_or(default_db) / 10.0)
    }

    pub fn delays_s(&self) -> Vec<f64> {
        self.delays_ms.iter().map(|d| d * 1e-3).collect()
    }

    pub fn sweep_delays_s(&self) -> Vec<f64> {
        self.sweep_delays_ms.iter().map(|d| d * 1e-3).collect()
    }

    pub fn regimes(&self) -> Vec<Regime> {
        self.regime.regimes()
    }

    pub fn mcs(&self) -> Result<McsTable> {
        match &self.mcs_table {
            Some(path) => McsTable::from_csv_path(path),
            None => Ok(McsTable::default_lte()),
        }
    }
}
