//! Closed-form prediction theory: correlation coefficients for periodic and
//! Poisson sampling, the MSE of the single-pole predictor in both regimes,
//! the optimal smoothing parameter with clipping, and a numerical optimizer
//! used as an independent cross-check.
//!
//! Both regimes share one MSE kernel in the squared correlation
//! c = ρ² (fixed) or c = E_τ[ρ²] (random):
//!
//!   mse(α) = 2·snr²/(2−α) · (1 − c) / (1 + (α−1)·c),   0 < α < 2,
//!
//! which is the ρ^{−2} form rewritten so that neither c = 0 nor c = 1 needs
//! a special case.

use crate::error::{Error, Result};
use crate::fading::{DopplerSpec, Regime};
use crate::specfun::{elliptic_k, exp_weighted_mean, j0, EllipticParameter};

use std::f64::consts::PI;

/// Lag-1 correlation summary at one delay: the fixed-regime coefficient
/// ρ = J0(2π f_d T_s) and the exponential-delay averages ρ̄ = E_τ[ρ] and
/// E_τ[ρ²].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSummary {
    pub rho: f64,
    pub mean_rho: f64,
    pub mean_rho_sq: f64,
}

impl CorrelationSummary {
    pub fn for_delay(doppler: DopplerSpec, delay_s: f64) -> Result<Self> {
        Ok(CorrelationSummary {
            rho: rho_fixed(doppler, delay_s)?,
            mean_rho: mean_rho(doppler, delay_s)?,
            mean_rho_sq: mean_rho_sq(doppler, delay_s)?,
        })
    }
}

fn check_delay(what: &str, delay: f64) -> Result<()> {
    if delay.is_finite() && delay > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: delay must be positive, got {delay}"
        )))
    }
}

fn check_snr(what: &str, snr: f64) -> Result<()> {
    if snr.is_finite() && snr > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what}: snr must be positive (linear), got {snr}"
        )))
    }
}

/// Fixed-regime lag-1 coefficient ρ = J0(2π f_d T_s).
pub fn rho_fixed(doppler: DopplerSpec, ts: f64) -> Result<f64> {
    check_delay("rho_fixed", ts)?;
    Ok(j0(2.0 * PI * doppler.doppler_hz() * ts))
}

/// Average lag-1 coefficient ρ̄ = E_τ[J0(2π f_d τ)] for exponential τ,
/// evaluated by adaptive quadrature. (Its Laplace-transform closed form is
/// 1/sqrt(1 + (2π f_d T̄)²), used as a cross-check in the tests.)
pub fn mean_rho(doppler: DopplerSpec, tbar: f64) -> Result<f64> {
    check_delay("mean_rho", tbar)?;
    let w = 2.0 * PI * doppler.doppler_hz();
    exp_weighted_mean(|tau| j0(w * tau), tbar)
}

/// Average squared coefficient E_τ[ρ²] = (2/π)·K(−16π² f_d² T̄²).
pub fn mean_rho_sq(doppler: DopplerSpec, tbar: f64) -> Result<f64> {
    check_delay("mean_rho_sq", tbar)?;
    let fd = doppler.doppler_hz();
    let m = EllipticParameter::new(-16.0 * PI * PI * fd * fd * tbar * tbar)?;
    Ok(2.0 / PI * elliptic_k(m))
}

/// Prediction MSE as a function of the squared lag-1 correlation `corr_sq`,
/// in units of snr². Shared kernel of both regimes.
pub fn mse_with_corr_sq(alpha: f64, corr_sq: f64, snr: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!(
            "mse: need 0 < alpha < 2, got {alpha}"
        )));
    }
    if !(corr_sq.is_finite() && (0.0..=1.0).contains(&corr_sq)) {
        return Err(Error::domain(format!(
            "mse: squared correlation must lie in [0, 1], got {corr_sq}"
        )));
    }
    check_snr("mse", snr)?;
    // 1 − α·c/(1 + (α−1)·c) simplified to (1 − c)/(1 + (α−1)·c), which is
    // free of cancellation and exactly zero at c = 1.
    let ratio = (1.0 - corr_sq) / (1.0 + (alpha - 1.0) * corr_sq);
    Ok(2.0 * snr * snr / (2.0 - alpha) * ratio)
}

/// MSE with fixed inter-block period and lag-1 coefficient `rho`.
pub fn mse_fixed(alpha: f64, rho: f64, snr: f64) -> Result<f64> {
    if !(rho.is_finite() && rho.abs() <= 1.0) {
        return Err(Error::domain(format!(
            "mse_fixed: need |rho| <= 1, got {rho}"
        )));
    }
    mse_with_corr_sq(alpha, rho * rho, snr)
}

/// MSE with exponential inter-block delay of mean `tbar`.
pub fn mse_random(alpha: f64, doppler: DopplerSpec, tbar: f64, snr: f64) -> Result<f64> {
    let corr_sq = mean_rho_sq(doppler, tbar)?;
    mse_with_corr_sq(alpha, corr_sq, snr)
}

/// Minimizer of the MSE kernel: (3 − 1/corr_sq)/2, clipped below at zero.
/// Zero means "predict with the process mean". Never exceeds 1 for
/// corr_sq in [0, 1].
pub fn alpha_opt_with_corr_sq(corr_sq: f64) -> f64 {
    debug_assert!(
        (0.0..=1.0).contains(&corr_sq),
        "corr_sq {corr_sq} out of [0, 1]"
    );
    if corr_sq == 0.0 {
        return 0.0;
    }
    (0.5 * (3.0 - 1.0 / corr_sq)).max(0.0)
}

/// Optimal smoothing parameter in the fixed regime.
pub fn alpha_opt_fixed(rho: f64) -> f64 {
    debug_assert!(rho.abs() <= 1.0, "rho {rho} out of [-1, 1]");
    alpha_opt_with_corr_sq(rho * rho)
}

/// Optimal smoothing parameter under exponential delays.
pub fn alpha_opt_random(doppler: DopplerSpec, tbar: f64) -> Result<f64> {
    Ok(alpha_opt_with_corr_sq(mean_rho_sq(doppler, tbar)?))
}

/// Independent numerical minimizer over (0, 2): a 20 000-point grid scan
/// refined by golden-section search to 1e-6, result clipped to [0, 2).
pub fn alpha_opt_numeric<F>(mse: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    const GRID: usize = 20_000;
    let step = 2.0 / GRID as f64;

    let mut best_i = 1;
    let mut best = f64::INFINITY;
    for i in 1..GRID {
        let a = i as f64 * step;
        let v = mse(a);
        if !v.is_finite() {
            return Err(Error::numerical(format!(
                "alpha_opt_numeric: objective is {v} at alpha = {a}"
            )));
        }
        if v < best {
            best = v;
            best_i = i;
        }
    }

    // Golden-section refinement on the bracketing pair of grid cells; the
    // probes stay strictly inside (0, 2).
    let gr = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut lo = (best_i - 1) as f64 * step;
    let mut hi = (best_i + 1) as f64 * step;
    let mut c = hi - gr * (hi - lo);
    let mut d = lo + gr * (hi - lo);
    let mut fc = mse(c);
    let mut fd = mse(d);
    while hi - lo > 1e-6 {
        if !(fc.is_finite() && fd.is_finite()) {
            return Err(Error::numerical(
                "alpha_opt_numeric: non-finite objective during refinement".to_string(),
            ));
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = mse(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = mse(d);
        }
    }
    Ok((0.5 * (lo + hi)).clamp(0.0, 2.0 - f64::EPSILON))
}

/// Power-sample correlation from the squared channel correlation:
/// E[γ_l γ_{l+i}] = snr²·(1 + E[h_l h*_{l+i}]²).
pub fn power_correlation(h_corr_sq: f64, snr: f64) -> Result<f64> {
    if !(h_corr_sq.is_finite() && (0.0..=1.0).contains(&h_corr_sq)) {
        return Err(Error::domain(format!(
            "power_correlation: squared correlation must lie in [0, 1], got {h_corr_sq}"
        )));
    }
    check_snr("power_correlation", snr)?;
    Ok(snr * snr * (1.0 + h_corr_sq))
}

/// An MSE curve over a grid of smoothing parameters at one delay.
#[derive(Debug, Clone, PartialEq)]
pub struct MseCurve {
    pub regime: Regime,
    pub delay_s: f64,
    pub snr: f64,
    pub alphas: Vec<f64>,
    pub mse_values: Vec<f64>,
}

impl MseCurve {
    pub fn new(
        regime: Regime,
        delay_s: f64,
        snr: f64,
        alphas: Vec<f64>,
        mse_values: Vec<f64>,
    ) -> Result<Self> {
        check_delay("MseCurve", delay_s)?;
        check_snr("MseCurve", snr)?;
        if alphas.is_empty() || alphas.len() != mse_values.len() {
            return Err(Error::domain(format!(
                "MseCurve: need matching non-empty grids, got {} alphas and {} values",
                alphas.len(),
                mse_values.len()
            )));
        }
        if alphas.iter().any(|&a| !(a > 0.0 && a < 2.0)) {
            return Err(Error::domain(
                "MseCurve: alphas must lie in (0, 2)".to_string(),
            ));
        }
        if mse_values.iter().any(|&v| !(v.is_finite() && v >= 0.0)) {
            return Err(Error::domain(
                "MseCurve: MSE values must be >= 0".to_string(),
            ));
        }
        Ok(MseCurve {
            regime,
            delay_s,
            snr,
            alphas,
            mse_values,
        })
    }

    /// MSE of always predicting the process mean: Var[γ] = snr².
    pub fn variance_floor(&self) -> f64 {
        self.snr * self.snr
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{generate_trace, make_schedule};
    use proptest::prelude::*;

    fn doppler_3kmh() -> DopplerSpec {
        DopplerSpec::from_kmh(3.0, 2.0e9).unwrap()
    }

    fn zero_doppler() -> DopplerSpec {
        DopplerSpec::from_doppler(0.0).unwrap()
    }

    // Frozen operating-point values, computed from the in-repo oracles
    // (series J0, AGM elliptic, adaptive quadrature).
    const RHO_10MS: f64 = 0.969_769_453_779_052;
    const RHO_40MS: f64 = 0.568_878_903_066_830_2;
    const MEAN_RHO_SQ_10MS: f64 = 0.903_286_270_669_062;
    const MEAN_RHO_SQ_40MS: f64 = 0.540_430_917_245_277;
    const MEAN_RHO_40MS: f64 = 0.582_266_774_884_955;

    #[test]
    fn rho_fixed_values_at_operating_points() {
        assert_eq!(rho_fixed(zero_doppler(), 0.01).unwrap(), 1.0);
        let d = doppler_3kmh();
        assert!((rho_fixed(d, 0.01).unwrap() - RHO_10MS).abs() < 1e-12);
        assert!((rho_fixed(d, 0.04).unwrap() - RHO_40MS).abs() < 1e-12);
        assert!(rho_fixed(d, 0.0).is_err());
        assert!(rho_fixed(d, -0.01).is_err());
    }

    #[test]
    fn mean_rho_matches_laplace_closed_form() {
        let d = doppler_3kmh();
        assert!((mean_rho(zero_doppler(), 0.04).unwrap() - 1.0).abs() < 1e-9);
        for &tbar in &[0.005, 0.01, 0.02, 0.04, 0.1] {
            let got = mean_rho(d, tbar).unwrap();
            let x = 2.0 * PI * d.doppler_hz() * tbar;
            let want = 1.0 / (1.0 + x * x).sqrt();
            assert!(
                ((got - want) / want).abs() < 1e-6,
                "tbar {tbar}: quadrature {got} vs closed form {want}"
            );
        }
        assert!((mean_rho(d, 0.04).unwrap() - MEAN_RHO_40MS).abs() < 1e-6);
        assert!(mean_rho(d, 0.0).is_err());
    }

    #[test]
    fn mean_rho_sq_matches_quadrature() {
        let d = doppler_3kmh();
        assert!((mean_rho_sq(zero_doppler(), 0.04).unwrap() - 1.0).abs() < 1e-12);
        for &(tbar, want) in &[(0.01, MEAN_RHO_SQ_10MS), (0.04, MEAN_RHO_SQ_40MS)] {
            let got = mean_rho_sq(d, tbar).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "tbar {tbar}: {got} vs {want}"
            );
            let w = 2.0 * PI * d.doppler_hz();
            let quad = exp_weighted_mean(|t| j0(w * t).powi(2), tbar).unwrap();
            assert!(
                ((got - quad) / quad).abs() < 1e-6,
                "elliptic {got} vs quadrature {quad}"
            );
        }
    }

    #[test]
    fn jensen_holds_between_the_correlation_averages() {
        let d = doppler_3kmh();
        for &delay in &[0.005, 0.01, 0.02, 0.03, 0.04, 0.08] {
            let s = CorrelationSummary::for_delay(d, delay).unwrap();
            assert!(s.rho.abs() <= 1.0);
            assert!(s.mean_rho_sq > 0.0 && s.mean_rho_sq <= 1.0);
            assert!(
                s.mean_rho * s.mean_rho <= s.mean_rho_sq + 1e-12,
                "delay {delay}: E[rho]^2 = {} > E[rho^2] = {}",
                s.mean_rho * s.mean_rho,
                s.mean_rho_sq
            );
        }
    }

    #[test]
    fn mse_fixed_limit_cases() {
        for &alpha in &[0.1, 0.5, 1.0, 1.5] {
            assert_eq!(mse_fixed(alpha, 1.0, 1.0).unwrap(), 0.0);
            assert_eq!(mse_fixed(alpha, -1.0, 1.0).unwrap(), 0.0);
        }
        // alpha -> 0+ recovers the variance floor snr^2.
        for &snr in &[1.0, 3.162_277_660_168_379_5] {
            let v = mse_fixed(1e-9, 0.7, snr).unwrap();
            assert!((v - snr * snr).abs() / (snr * snr) < 1e-6, "floor {v}");
        }
        // alpha = 1 is the previous-sample predictor: 2 snr^2 (1 - rho^2).
        for &rho in &[0.0, 0.3, RHO_10MS] {
            let got = mse_fixed(1.0, rho, 2.0).unwrap();
            let want = 2.0 * 4.0 * (1.0 - rho * rho);
            assert!((got - want).abs() < 1e-12, "rho {rho}: {got} vs {want}");
        }
        // rho = 0 keeps the whole curve finite with no special case.
        let v = mse_fixed(0.5, 0.0, 1.0).unwrap();
        assert!((v - 2.0 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn mse_rejects_out_of_domain_arguments() {
        assert!(mse_fixed(0.0, 0.5, 1.0).is_err());
        assert!(mse_fixed(2.0, 0.5, 1.0).is_err());
        assert!(mse_fixed(0.5, 1.5, 1.0).is_err());
        assert!(mse_fixed(0.5, 0.5, 0.0).is_err());
        assert!(mse_random(0.5, doppler_3kmh(), 0.0, 1.0).is_err());
    }

    #[test]
    fn alpha_opt_fixed_values() {
        assert_eq!(alpha_opt_fixed(1.0), 1.0);
        assert_eq!(alpha_opt_fixed(0.0), 0.0);
        // Clipping boundary rho^2 = 1/3.
        assert!(alpha_opt_fixed((1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        // 40 ms operating point clips to zero (raw value is negative).
        assert_eq!(alpha_opt_fixed(RHO_40MS), 0.0);
        assert_eq!(alpha_opt_fixed(0.5669), 0.0);
        // 10 ms operating point.
        assert!((alpha_opt_fixed(RHO_10MS) - 0.968_341_203_87).abs() < 1e-9);
    }

    #[test]
    fn mse_random_reduces_to_the_shared_kernel() {
        let d = doppler_3kmh();
        let tbar = 0.04;
        let corr_sq = mean_rho_sq(d, tbar).unwrap();
        for &alpha in &[0.05, 0.3, 0.574_812_369, 1.0, 1.4] {
            let direct = mse_random(alpha, d, tbar, 1.0).unwrap();
            let kernel = mse_with_corr_sq(alpha, corr_sq, 1.0).unwrap();
            assert_eq!(direct, kernel, "kernel delegation must be exact");
            let via_rho = mse_fixed(alpha, corr_sq.sqrt(), 1.0).unwrap();
            assert!(
                ((direct - via_rho) / direct.max(1e-30)).abs() < 1e-12,
                "alpha {alpha}: {direct} vs sqrt round-trip {via_rho}"
            );
        }
    }

    #[test]
    fn mse_random_limit_cases_and_operating_point() {
        let d = doppler_3kmh();
        for &alpha in &[0.1, 0.5, 1.0] {
            assert_eq!(mse_random(alpha, zero_doppler(), 0.04, 1.0).unwrap(), 0.0);
        }
        let v = mse_random(1e-9, d, 0.04, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-6);

        let a_opt = alpha_opt_random(d, 0.04).unwrap();
        assert!((a_opt - 0.574_812_369_084).abs() < 1e-9);
        let mse_min = mse_random(a_opt, d, 0.04, 1.0).unwrap();
        assert!((mse_min - 0.837_329_754_968).abs() < 1e-9);
        // 16-20% below the variance floor at the same mean delay.
        assert!(mse_min > 0.80 && mse_min < 0.84);
    }

    #[test]
    fn alpha_opt_random_limit_cases() {
        assert_eq!(alpha_opt_random(zero_doppler(), 0.04).unwrap(), 1.0);
        assert!(alpha_opt_random(doppler_3kmh(), -1.0).is_err());
        assert!(alpha_opt_with_corr_sq(1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn numeric_optimizer_finds_known_minima() {
        let q = alpha_opt_numeric(|a| (a - 0.5) * (a - 0.5)).unwrap();
        assert!((q - 0.5).abs() < 1e-5, "quadratic argmin {q}");

        let rho = RHO_10MS;
        let numeric = alpha_opt_numeric(|a| mse_fixed(a, rho, 1.0).unwrap()).unwrap();
        assert!(
            (numeric - alpha_opt_fixed(rho)).abs() < 1e-4,
            "numeric {numeric} vs analytic {}",
            alpha_opt_fixed(rho)
        );

        let d = doppler_3kmh();
        let corr_sq = mean_rho_sq(d, 0.04).unwrap();
        let numeric = alpha_opt_numeric(|a| mse_with_corr_sq(a, corr_sq, 1.0).unwrap()).unwrap();
        let analytic = alpha_opt_random(d, 0.04).unwrap();
        assert!(
            (numeric - analytic).abs() < 1e-4,
            "numeric {numeric} vs {analytic}"
        );

        assert!(alpha_opt_numeric(|_| f64::NAN).is_err());
    }

    #[test]
    fn numeric_optimizer_handles_clipped_cells() {
        // Monotone-increasing objective: the infimum sits at the open left
        // edge, matching the clipped analytic value 0 within 1e-4.
        let numeric = alpha_opt_numeric(|a| mse_fixed(a, RHO_40MS, 1.0).unwrap()).unwrap();
        assert!(numeric.abs() < 1e-3, "clipped argmin {numeric}");
    }

    #[test]
    fn power_correlation_endpoints() {
        assert_eq!(power_correlation(0.0, 2.0).unwrap(), 4.0);
        assert_eq!(power_correlation(1.0, 2.0).unwrap(), 8.0);
        assert!(power_correlation(-0.1, 1.0).is_err());
        assert!(power_correlation(1.1, 1.0).is_err());
    }

    #[test]
    fn analytic_minimum_beats_every_grid_point_and_respects_the_floor() {
        let d = doppler_3kmh();
        for &(regime, delay) in &[
            (Regime::Fixed, 0.01),
            (Regime::Fixed, 0.03),
            (Regime::Random, 0.02),
            (Regime::Random, 0.04),
        ] {
            let corr_sq = match regime {
                Regime::Fixed => rho_fixed(d, delay).unwrap().powi(2),
                Regime::Random => mean_rho_sq(d, delay).unwrap(),
            };
            let a_opt = alpha_opt_with_corr_sq(corr_sq);
            let mse_at_opt = if a_opt > 0.0 {
                mse_with_corr_sq(a_opt, corr_sq, 1.0).unwrap()
            } else {
                1.0 // variance floor: the constant mean predictor
            };
            let mut grid_min = f64::INFINITY;
            for i in 1..4000 {
                let a = i as f64 * 2.0 / 4000.0;
                let v = mse_with_corr_sq(a, corr_sq, 1.0).unwrap();
                grid_min = grid_min.min(v);
                assert!(
                    mse_at_opt <= v + 1e-9,
                    "{regime} {delay}: mse({a_opt}) = {mse_at_opt} > mse({a}) = {v}"
                );
            }
            assert!(grid_min.min(mse_at_opt) <= 1.0 + 1e-9, "floor violated");
        }
    }

    #[test]
    fn minimum_mse_is_nondecreasing_in_delay() {
        let d = doppler_3kmh();
        let mut prev_fixed = 0.0;
        let mut prev_random = 0.0;
        for &delay in &[0.01, 0.02, 0.03, 0.04] {
            let rho = rho_fixed(d, delay).unwrap();
            let a_f = alpha_opt_fixed(rho);
            let m_f = if a_f > 0.0 {
                mse_fixed(a_f, rho, 1.0).unwrap()
            } else {
                1.0
            };
            let a_r = alpha_opt_random(d, delay).unwrap();
            let m_r = if a_r > 0.0 {
                mse_random(a_r, d, delay, 1.0).unwrap()
            } else {
                1.0
            };
            assert!(
                m_f >= prev_fixed - 1e-12,
                "fixed minimum decreased at {delay}"
            );
            assert!(
                m_r >= prev_random - 1e-12,
                "random minimum decreased at {delay}"
            );
            prev_fixed = m_f;
            prev_random = m_r;
        }
    }

    #[test]
    fn random_power_correlation_factorizes_over_lags() {
        // Under Poisson sampling the product of per-step coefficients
        // factorizes, so E[γ_l γ_{l+L}] = snr²(1 + E[ρ²]^L).
        let d = doppler_3kmh();
        let tbar = 0.04;
        let s = make_schedule(Regime::Random, tbar, 1_000_000, 53).unwrap();
        let trace = generate_trace(s, d, 53);
        let powers: Vec<f64> = trace.gains().iter().map(|h| h.norm_sqr()).collect();
        let corr_sq = mean_rho_sq(d, tbar).unwrap();
        for lag in 1..=3usize {
            let n = powers.len() - lag;
            let emp: f64 = (0..n).map(|l| powers[l + lag] * powers[l]).sum::<f64>() / n as f64;
            let want = power_correlation(corr_sq.powi(lag as i32), 1.0).unwrap();
            assert!(
                ((emp - want) / want).abs() < 0.03,
                "lag {lag}: empirical {emp} vs {want}"
            );
        }
    }

    #[test]
    fn mse_curve_validates_its_grids() {
        let ok = MseCurve::new(Regime::Fixed, 0.01, 1.0, vec![0.5, 1.0], vec![0.2, 0.3]);
        assert!(ok.is_ok());
        assert_eq!(ok.unwrap().variance_floor(), 1.0);
        assert!(MseCurve::new(Regime::Fixed, 0.01, 1.0, vec![], vec![]).is_err());
        assert!(MseCurve::new(Regime::Fixed, 0.01, 1.0, vec![0.5], vec![0.1, 0.2]).is_err());
        assert!(MseCurve::new(Regime::Fixed, 0.01, 1.0, vec![2.0], vec![0.1]).is_err());
        assert!(MseCurve::new(Regime::Fixed, 0.01, 1.0, vec![0.5], vec![-0.1]).is_err());
    }

    proptest! {
        #[test]
        fn alpha_opt_stays_in_the_unit_interval(c in 0.0f64..=1.0) {
            let a = alpha_opt_with_corr_sq(c);
            prop_assert!((0.0..=1.0).contains(&a), "alpha_opt({}) = {}", c, a);
        }

        #[test]
        fn kernel_mse_is_nonnegative_and_below_twice_the_floor(
            alpha in 0.001f64..1.999,
            c in 0.0f64..=1.0,
        ) {
            let v = mse_with_corr_sq(alpha, c, 1.0).unwrap();
            prop_assert!(v >= -1e-12);
            prop_assert!(v <= 4.0 / (2.0 - alpha) + 1e-9);
        }
    }
}
