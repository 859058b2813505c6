//! Single-pole IIR prediction of power samples, the equivalent truncated
//! impulse-response form, the amplitude-domain variant used for the bias
//! study, and empirical MSE measurement.
//!
//! Predictions are strictly causal: output l is formed from inputs 0..l only,
//! and output 0 is the initial guess.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fading::ChannelTrace;

fn check_alpha(alpha: f64, allow_zero: bool) -> Result<()> {
    let ok = alpha.is_finite() && alpha < 2.0 && (alpha > 0.0 || (allow_zero && alpha == 0.0));
    if ok {
        Ok(())
    } else {
        let lo = if allow_zero {
            "0 <= alpha"
        } else {
            "0 < alpha"
        };
        Err(Error::domain(format!(
            "predictor: need {lo} < 2, got {alpha}"
        )))
    }
}

/// Running state of the smoother: γ̂_{l+1} = (1−α)·γ̂_l + α·γ_l.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorState {
    alpha: f64,
    current: f64,
}

impl PredictorState {
    /// `alpha` in [0, 2); `alpha = 0` degenerates to a constant predictor.
    pub fn new(alpha: f64, init: f64) -> Result<Self> {
        check_alpha(alpha, true)?;
        if !init.is_finite() {
            return Err(Error::domain(format!(
                "predictor: initial prediction must be finite, got {init}"
            )));
        }
        Ok(PredictorState {
            alpha,
            current: init,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The prediction for the next (not yet observed) sample.
    pub fn prediction(&self) -> f64 {
        self.current
    }

    /// Fold in an observed sample.
    pub fn advance(&mut self, observed: f64) {
        self.current = (1.0 - self.alpha) * self.current + self.alpha * observed;
    }
}

/// Run the smoother over a power sequence. `output[l]` is the prediction of
/// `powers[l]` formed from `powers[..l]`; `output[0] = init`.
pub fn iir_predict(powers: &[f64], alpha: f64, init: f64) -> Result<Vec<f64>> {
    let mut state = PredictorState::new(alpha, init)?;
    let mut out = Vec::with_capacity(powers.len());
    for &gamma in powers {
        out.push(state.prediction());
        state.advance(gamma);
    }
    Ok(out)
}

/// Prediction via the truncated impulse response:
/// `output[l] = α·Σ_{i=0}^{min(l−1, truncation)} (1−α)^i · powers[l−1−i]`.
///
/// Agrees with `iir_predict(powers, alpha, 0.0)` up to a geometric tail of
/// size (1−α)^truncation · max|γ|.
pub fn impulse_response_predict(powers: &[f64], alpha: f64, truncation: usize) -> Result<Vec<f64>> {
    check_alpha(alpha, false)?;
    if truncation == 0 {
        return Err(Error::domain(
            "impulse_response_predict: truncation must be >= 1".to_string(),
        ));
    }
    let decay = 1.0 - alpha;
    let mut out = Vec::with_capacity(powers.len());
    for l in 0..powers.len() {
        if l == 0 {
            out.push(0.0);
            continue;
        }
        let terms = (l - 1).min(truncation);
        let mut acc = 0.0;
        // Highest lag first so the dominant recent samples are added last.
        for i in (0..=terms).rev() {
            acc += decay.powi(i as i32) * powers[l - 1 - i];
        }
        out.push(alpha * acc);
    }
    Ok(out)
}

/// Run the smoother on the complex gains and square the result, i.e. predict
/// power through the amplitude domain. Output l is |ĥ_l|² with ĥ_0 = init;
/// the snr factor is excluded.
pub fn amplitude_predict_power(
    trace: &ChannelTrace,
    alpha: f64,
    init: Complex64,
) -> Result<Vec<f64>> {
    check_alpha(alpha, false)?;
    let mut h_hat = init;
    let mut out = Vec::with_capacity(trace.len());
    for &h in trace.gains() {
        out.push(h_hat.norm_sqr());
        h_hat = (1.0 - alpha) * h_hat + alpha * h;
    }
    Ok(out)
}

/// Mean squared prediction error over indices >= warmup.
pub fn empirical_mse(predictions: &[f64], actuals: &[f64], warmup: usize) -> Result<f64> {
    if predictions.len() != actuals.len() {
        return Err(Error::domain(format!(
            "empirical_mse: length mismatch ({} predictions vs {} actuals)",
            predictions.len(),
            actuals.len()
        )));
    }
    if warmup >= predictions.len() {
        return Err(Error::domain(format!(
            "empirical_mse: warmup {} leaves no samples out of {}",
            warmup,
            predictions.len()
        )));
    }
    let n = predictions.len() - warmup;
    let sum: f64 = predictions[warmup..]
        .iter()
        .zip(&actuals[warmup..])
        .map(|(p, a)| (p - a) * (p - a))
        .sum();
    Ok(sum / n as f64)
}

/// Samples to discard before measuring MSE; the initialization transient
/// decays as (1−α)^l.
pub fn default_warmup(alpha: f64) -> usize {
    if alpha <= 0.0 {
        1000
    } else {
        1000usize.max((10.0 / alpha).ceil() as usize)
    }
}

/// Stationary ratio E[|ĥ|²] / E[|h|²] of the amplitude-domain predictor on a
/// fixed-spacing AR(1) channel with lag-1 coefficient `rho`:
/// α/(2−α) · (1 + 2(1−α)ρ / (1 − (1−α)ρ)).
pub fn bias_factor_closed_form(alpha: f64, rho: f64) -> Result<f64> {
    check_alpha(alpha, false)?;
    if !(rho.is_finite() && rho.abs() < 1.0) {
        return Err(Error::domain(format!(
            "bias_factor_closed_form: need |rho| < 1, got {rho}"
        )));
    }
    let q = (1.0 - alpha) * rho;
    if q.abs() >= 1.0 {
        return Err(Error::domain(format!(
            "bias_factor_closed_form: geometric series diverges for (1-alpha)*rho = {q}"
        )));
    }
    Ok(alpha / (2.0 - alpha) * (1.0 + 2.0 * q / (1.0 - q)))
}
