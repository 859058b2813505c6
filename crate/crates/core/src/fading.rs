//! Sampling schedules (periodic or Poisson) and AR(1) Rayleigh fading traces
//! generated over them.
//!
//! All randomness derives from a single u64 seed through ChaCha8 with one
//! stream id per purpose: stream 0 feeds arrival draws, stream 1 feeds fading
//! innovations. Fixed and random regimes therefore see the same innovation
//! sequence under the same seed, which keeps them directly comparable.
//!
//! Units: time in seconds, Doppler in Hz, SNR linear.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::specfun::j0;

pub const SPEED_OF_LIGHT_MPS: f64 = 3.0e8;

/// Reference carrier used when a spec is built from a bare Doppler bandwidth.
const REFERENCE_CARRIER_HZ: f64 = 2.0e9;

const STREAM_ARRIVALS: u64 = 0;
const STREAM_INNOVATIONS: u64 = 1;

/// Terminal speed and carrier frequency with the derived Doppler bandwidth
/// f_d = v·f_c/c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerSpec {
    speed_mps: f64,
    carrier_hz: f64,
    doppler_hz: f64,
}

impl DopplerSpec {
    pub fn new(speed_mps: f64, carrier_hz: f64) -> Result<Self> {
        if !(speed_mps.is_finite() && speed_mps >= 0.0) {
            return Err(Error::domain(format!(
                "DopplerSpec: speed must be >= 0 m/s, got {speed_mps}"
            )));
        }
        if !(carrier_hz.is_finite() && carrier_hz > 0.0) {
            return Err(Error::domain(format!(
                "DopplerSpec: carrier must be positive, got {carrier_hz}"
            )));
        }
        Ok(DopplerSpec {
            speed_mps,
            carrier_hz,
            doppler_hz: speed_mps * carrier_hz / SPEED_OF_LIGHT_MPS,
        })
    }

    pub fn from_kmh(speed_kmh: f64, carrier_hz: f64) -> Result<Self> {
        Self::new(speed_kmh / 3.6, carrier_hz)
    }

    /// Build a spec from a Doppler bandwidth directly, backing out the speed
    /// at a 2 GHz reference carrier.
    pub fn from_doppler(doppler_hz: f64) -> Result<Self> {
        if !(doppler_hz.is_finite() && doppler_hz >= 0.0) {
            return Err(Error::domain(format!(
                "DopplerSpec: Doppler bandwidth must be >= 0 Hz, got {doppler_hz}"
            )));
        }
        let speed_mps = doppler_hz * SPEED_OF_LIGHT_MPS / REFERENCE_CARRIER_HZ;
        Self::new(speed_mps, REFERENCE_CARRIER_HZ)
    }

    pub fn speed_mps(&self) -> f64 {
        self.speed_mps
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn doppler_hz(&self) -> f64 {
        self.doppler_hz
    }
}

/// Inter-block timing law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Constant period T_s between blocks.
    Fixed,
    /// Poisson arrivals: i.i.d. exponential gaps with mean T̄.
    Random,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Fixed => write!(f, "fixed"),
            Regime::Random => write!(f, "random"),
        }
    }
}

/// Block arrival instants starting at 0, plus the realized gap after each
/// instant. `intervals[l]` is the gap between instants l and l+1; the final
/// entry extends past the last instant so that every block owns one gap and
/// the total duration is the sum of all gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalSchedule {
    regime: Regime,
    interval: f64,
    instants: Vec<f64>,
    intervals: Vec<f64>,
}

impl ArrivalSchedule {
    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// The timing parameter: T_s in the fixed regime, T̄ in the random one.
    pub fn interval(&self) -> f64 {
        self.interval
    }

    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    pub fn intervals(&self) -> &[f64] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.instants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }

    /// Total time spanned, counting one gap per block.
    pub fn duration(&self) -> f64 {
        self.intervals.iter().sum()
    }
}

/// Draw of an Exp(1/tbar) gap by inverse transform on an open-interval
/// uniform, so the result is strictly positive.
fn exponential_gap<R: Rng>(rng: &mut R, tbar: f64) -> f64 {
    let u: f64 = rng.sample(Open01);
    -tbar * u.ln()
}

/// Build an arrival schedule with `count` instants.
///
/// Fixed regime: instants at multiples of the interval. Random regime:
/// partial sums of i.i.d. exponential gaps with the given mean,
/// reproducible from the seed.
pub fn make_schedule(
    regime: Regime,
    interval: f64,
    count: usize,
    seed: u64,
) -> Result<ArrivalSchedule> {
    if !(interval.is_finite() && interval > 0.0) {
        return Err(Error::domain(format!(
            "make_schedule: interval must be positive, got {interval}"
        )));
    }
    if count < 2 {
        return Err(Error::domain(format!(
            "make_schedule: need at least 2 instants, got {count}"
        )));
    }

    let intervals = match regime {
        Regime::Fixed => vec![interval; count],
        Regime::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(STREAM_ARRIVALS);
            (0..count)
                .map(|_| exponential_gap(&mut rng, interval))
                .collect()
        }
    };

    let mut instants = Vec::with_capacity(count);
    let mut t = 0.0;
    for gap in intervals.iter().take(count - 1) {
        instants.push(t);
        t += gap;
    }
    instants.push(t);

    Ok(ArrivalSchedule {
        regime,
        interval,
        instants,
        intervals,
    })
}

/// Unit-power complex fading samples over a schedule, together with the
/// per-step correlation coefficients and innovations that produced them.
#[derive(Debug, Clone)]
pub struct ChannelTrace {
    schedule: Arc<ArrivalSchedule>,
    doppler: DopplerSpec,
    gains: Vec<Complex64>,
    rhos: Vec<f64>,
    innovations: Vec<Complex64>,
}

impl ChannelTrace {
    pub fn schedule(&self) -> &Arc<ArrivalSchedule> {
        &self.schedule
    }

    pub fn doppler(&self) -> DopplerSpec {
        self.doppler
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    /// Per-step correlation coefficients; `rhos[l]` links gains l and l+1.
    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    /// Driving noise; `innovations[0]` is the initial state itself.
    pub fn innovations(&self) -> &[Complex64] {
        &self.innovations
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    // CN(0,1) by polar transform: |h|^2 ~ Exp(1), phase uniform.
    let u1: f64 = rng.sample(Open01);
    let u2: f64 = rng.gen();
    let r = (-u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

/// Generate an AR(1) fading trace over a schedule.
///
/// The initial state is a standard complex normal (the stationary
/// distribution), and each step applies
/// h_{l+1} = rho_l·h_l + sqrt(1 − rho_l²)·e_{l+1} with
/// rho_l = J0(2π f_d τ_l) for the realized gap τ_l. Deterministic per seed.
pub fn generate_trace(schedule: ArrivalSchedule, doppler: DopplerSpec, seed: u64) -> ChannelTrace {
    let n = schedule.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_INNOVATIONS);

    let mut gains = Vec::with_capacity(n);
    let mut rhos = Vec::with_capacity(n.saturating_sub(1));
    let mut innovations = Vec::with_capacity(n);

    let h0 = complex_normal(&mut rng);
    innovations.push(h0);
    gains.push(h0);

    let two_pi_fd = 2.0 * std::f64::consts::PI * doppler.doppler_hz();
    for l in 0..n - 1 {
        let tau = schedule.intervals()[l];
        let rho = j0(two_pi_fd * tau);
        let e = complex_normal(&mut rng);
        let h = rho * gains[l] + (1.0 - rho * rho).max(0.0).sqrt() * e;
        innovations.push(e);
        rhos.push(rho);
        gains.push(h);
    }

    ChannelTrace {
        schedule: Arc::new(schedule),
        doppler,
        gains,
        rhos,
        innovations,
    }
}

/// Instantaneous received powers γ_l = snr·|h_l|² over a trace.
#[derive(Debug, Clone)]
pub struct PowerTrace {
    schedule: Arc<ArrivalSchedule>,
    powers: Vec<f64>,
    snr: f64,
}

impl PowerTrace {
    pub fn schedule(&self) -> &Arc<ArrivalSchedule> {
        &self.schedule
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }
}

pub fn power_trace(trace: &ChannelTrace, snr: f64) -> Result<PowerTrace> {
    if !(snr.is_finite() && snr > 0.0) {
        return Err(Error::domain(format!(
            "power_trace: snr must be positive (linear), got {snr}"
        )));
    }
    Ok(PowerTrace {
        schedule: Arc::clone(&trace.schedule),
        powers: trace.gains.iter().map(|h| snr * h.norm_sqr()).collect(),
        snr,
    })
}

/// Lag-l sample autocorrelation of the complex gains, normalized by the
/// in-window mean power so a constant trace reports exactly 1.
pub fn empirical_autocorr(trace: &ChannelTrace, lag: usize) -> Result<Complex64> {
    if lag == 0 {
        return Err(Error::domain(
            "empirical_autocorr: lag must be >= 1".to_string(),
        ));
    }
    if trace.len() <= lag + 10 {
        return Err(Error::domain(format!(
            "empirical_autocorr: trace of length {} too short for lag {}",
            trace.len(),
            lag
        )));
    }
    let n = trace.len() - lag;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for l in 0..n {
        num += trace.gains[l + lag] * trace.gains[l].conj();
        den += trace.gains[l].norm_sqr();
    }
    Ok(num / den)
}

/// Debug dump of a trace: `index,time_s,re,im,rho_step`, where `rho_step` on
/// row l is the coefficient used to reach sample l (blank on the first row).
pub fn write_trace_csv<W: Write>(trace: &ChannelTrace, mut w: W) -> std::io::Result<()> {
    writeln!(w, "index,time_s,re,im,rho_step")?;
    for (l, h) in trace.gains.iter().enumerate() {
        let t = trace.schedule.instants()[l];
        if l == 0 {
            writeln!(w, "{l},{t},{},{},", h.re, h.im)?;
        } else {
            writeln!(w, "{l},{t},{},{},{}", h.re, h.im, trace.rhos[l - 1])?;
        }
    }
    Ok(())
}
