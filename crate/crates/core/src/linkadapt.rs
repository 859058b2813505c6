//! MCS tables, the SINR-threshold success model, prediction-driven MCS
//! selection, and the non-adaptive fixed-rate baseline.
//!
//! A block sent with entry j succeeds iff the true power strictly exceeds the
//! threshold S_j; selection admits equality (S_j <= predicted). Below the
//! lowest threshold the radio still transmits at entry 0.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fading::ArrivalSchedule;

/// One modulation-and-coding operating point: linear SINR threshold plus
/// spectral efficiency in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub threshold: f64,
    pub rate: f64,
}

/// Ascending MCS ladder. Thresholds and rates are both strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

/// LTE-CQI-like default ladder shipped with the crate (15 entries,
/// efficiencies 0.1523-5.5547 bits/s/Hz, thresholds -7 to 20 dB).
const DEFAULT_TABLE_CSV: &str = include_str!("../data/default_mcs.csv");

impl McsTable {
    pub fn new(entries: Vec<McsEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain(
                "McsTable: at least one entry required".to_string(),
            ));
        }
        for e in &entries {
            if !(e.threshold.is_finite() && e.threshold > 0.0) {
                return Err(Error::domain(format!(
                    "McsTable: thresholds must be positive linear SINR, got {}",
                    e.threshold
                )));
            }
            if !(e.rate.is_finite() && e.rate > 0.0) {
                return Err(Error::domain(format!(
                    "McsTable: rates must be positive, got {}",
                    e.rate
                )));
            }
        }
        for w in entries.windows(2) {
            if w[1].threshold <= w[0].threshold || w[1].rate <= w[0].rate {
                return Err(Error::domain(format!(
                    "McsTable: thresholds and rates must be strictly increasing, \
                     got ({}, {}) after ({}, {})",
                    w[1].threshold, w[1].rate, w[0].threshold, w[0].rate
                )));
            }
        }
        Ok(McsTable { entries })
    }

    pub fn default_lte() -> Self {
        Self::parse_csv(DEFAULT_TABLE_CSV, "<built-in>").expect("built-in table is valid")
    }

    /// Parse a `threshold_db,rate_bps_hz` CSV; thresholds are converted from
    /// dB to linear.
    pub fn from_csv_reader<R: Read>(reader: R, origin: &str) -> Result<Self> {
        let mut text = String::new();
        let mut reader = BufReader::new(reader);
        reader
            .read_to_string(&mut text)
            .map_err(|e| Error::parse(origin, e.to_string()))?;
        Self::parse_csv(&text, origin)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file, &path.display().to_string())
    }

    fn parse_csv(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "threshold_db,rate_bps_hz" => {}
            other => {
                return Err(Error::parse(
                    origin,
                    format!(
                        "expected header 'threshold_db,rate_bps_hz', got {:?}",
                        other.map(|(_, l)| l)
                    ),
                ));
            }
        }
        let mut entries = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let parse = |field: Option<&str>, what: &str| -> Result<f64> {
                field
                    .ok_or_else(|| Error::parse(origin, format!("line {}: missing {what}", i + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::parse(origin, format!("line {}: {what}: {e}", i + 1)))
            };
            let threshold_db = parse(fields.next(), "threshold_db")?;
            let rate = parse(fields.next(), "rate_bps_hz")?;
            if fields.next().is_some() {
                return Err(Error::parse(
                    origin,
                    format!("line {}: too many fields", i + 1),
                ));
            }
            entries.push(McsEntry {
                threshold: 10.0_f64.powf(threshold_db / 10.0),
                rate,
            });
        }
        Self::new(entries)
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rate(&self, index: usize) -> f64 {
        self.entries[index].rate
    }

    pub fn threshold(&self, index: usize) -> f64 {
        self.entries[index].threshold
    }
}

/// Result of one block transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockOutcome {
    pub mcs_index: usize,
    pub success: bool,
    /// Entry rate on success, 0 otherwise.
    pub realized_rate: f64,
    pub true_power: f64,
    /// NaN when the outcome was evaluated without a prediction attached.
    pub predicted_power: f64,
}

/// Highest-rate entry whose threshold the predicted power meets (equality
/// counts); entry 0 when the prediction is below every threshold.
pub fn select_mcs(predicted_power: f64, table: &McsTable) -> Result<usize> {
    if !(predicted_power.is_finite() && predicted_power >= 0.0) {
        return Err(Error::domain(format!(
            "select_mcs: predicted power must be >= 0, got {predicted_power}"
        )));
    }
    let qualifying = table
        .entries
        .partition_point(|e| e.threshold <= predicted_power);
    Ok(qualifying.saturating_sub(1))
}

/// Evaluate the threshold test for one block: success iff the true power
/// strictly exceeds the selected entry's threshold.
pub fn evaluate_block(true_power: f64, mcs_index: usize, table: &McsTable) -> Result<BlockOutcome> {
    if mcs_index >= table.len() {
        return Err(Error::domain(format!(
            "evaluate_block: index {mcs_index} out of range for {}-entry table",
            table.len()
        )));
    }
    if !(true_power.is_finite() && true_power >= 0.0) {
        return Err(Error::domain(format!(
            "evaluate_block: true power must be >= 0, got {true_power}"
        )));
    }
    let entry = table.entries[mcs_index];
    let success = true_power > entry.threshold;
    Ok(BlockOutcome {
        mcs_index,
        success,
        realized_rate: if success { entry.rate } else { 0.0 },
        true_power,
        predicted_power: f64::NAN,
    })
}

/// Select from the prediction, then evaluate against the true power.
pub fn adapt_and_evaluate(
    predicted_power: f64,
    true_power: f64,
    table: &McsTable,
) -> Result<BlockOutcome> {
    let index = select_mcs(predicted_power, table)?;
    let mut outcome = evaluate_block(true_power, index, table)?;
    outcome.predicted_power = predicted_power;
    Ok(outcome)
}

/// Success-probability model used to pick the fixed-rate entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum FixedRateConvention {
    /// P[success] = exp(-S/(2 snr)).
    Paper,
    /// P[success] = exp(-S/snr), the unit-mean exponential power model.
    Rayleigh,
}

impl FixedRateConvention {
    fn kappa(self) -> f64 {
        match self {
            FixedRateConvention::Paper => 2.0,
            FixedRateConvention::Rayleigh => 1.0,
        }
    }
}

impl fmt::Display for FixedRateConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedRateConvention::Paper => write!(f, "paper"),
            FixedRateConvention::Rayleigh => write!(f, "rayleigh"),
        }
    }
}

/// Entry maximizing expected throughput exp(-S_j/(kappa snr))·R_j when the
/// same MCS is used for every transmission. Ties break toward the lower
/// index.
pub fn fixed_rate_index(
    snr: f64,
    table: &McsTable,
    convention: FixedRateConvention,
) -> Result<usize> {
    if !(snr.is_finite() && snr > 0.0) {
        return Err(Error::domain(format!(
            "fixed_rate_index: snr must be positive (linear), got {snr}"
        )));
    }
    let kappa = convention.kappa();
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (j, e) in table.entries.iter().enumerate() {
        let value = (-e.threshold / (kappa * snr)).exp() * e.rate;
        if value > best_value {
            best_value = value;
            best = j;
        }
    }
    Ok(best)
}

/// Throughput aggregation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum ThroughputWeighting {
    /// Mean realized rate per block, in bits/s/Hz.
    PerBlock,
    /// Realized rate summed over blocks divided by the elapsed time, in
    /// bits/s/Hz per second; each block owns one inter-arrival gap.
    PerTime,
}

impl fmt::Display for ThroughputWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThroughputWeighting::PerBlock => write!(f, "per_block"),
            ThroughputWeighting::PerTime => write!(f, "per_time"),
        }
    }
}

/// Aggregate throughput over a run of block outcomes aligned with a schedule.
pub fn throughput(
    outcomes: &[BlockOutcome],
    weighting: ThroughputWeighting,
    schedule: &ArrivalSchedule,
) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::domain("throughput: no outcomes".to_string()));
    }
    if outcomes.len() != schedule.len() {
        return Err(Error::domain(format!(
            "throughput: {} outcomes vs {} scheduled blocks",
            outcomes.len(),
            schedule.len()
        )));
    }
    let total: f64 = outcomes.iter().map(|o| o.realized_rate).sum();
    Ok(match weighting {
        ThroughputWeighting::PerBlock => total / outcomes.len() as f64,
        ThroughputWeighting::PerTime => total / schedule.duration(),
    })
}
