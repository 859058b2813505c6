//! Numerical special functions: Bessel J0, the complete elliptic integral of
//! the first kind for parameter m < 1 (including m < 0), and an adaptive
//! quadrature for exponentially weighted means.
//!
//! K uses the *parameter* convention: K(m) = ∫₀^{π/2} (1 − m·sin²θ)^{−1/2} dθ,
//! i.e. m = k² in terms of the modulus k.

use crate::error::{Error, Result};

/// 1/sqrt(pi)
const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Bessel function of the first kind, order zero.
///
/// Power series for |x| <= 8, Hankel asymptotic form with rational
/// P0/Q0 approximations beyond. Absolute accuracy is a few ulp over
/// the whole real line.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j0: non-finite input {x}")));
    }
    Ok(j0(x))
}

pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 8.0 {
        j0_series(ax)
    } else {
        j0_asymptotic(ax)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..=120u32 {
        let kf = f64::from(k);
        term *= -q / (kf * kf);
        sum += term;
        if term.abs() < 1e-20 {
            break;
        }
    }
    sum
}

// Rational approximations of the asymptotic amplitude functions P0 and Q0
// for x >= 8 (coefficients from the classical Sun/FDLIBM tables, kept at
// their published precision).
#[allow(clippy::excessive_precision)]
const P0_R: [f64; 6] = [
    0.0,
    -7.031_249_999_999_003_57e-02,
    -8.081_670_412_753_497_96e+00,
    -2.570_631_056_797_048_47e+02,
    -2.485_216_410_094_288_22e+03,
    -5.253_043_804_907_295_45e+03,
];
#[allow(clippy::excessive_precision)]
const P0_S: [f64; 5] = [
    1.165_343_646_196_681_82e+02,
    3.833_744_753_641_218_27e+03,
    4.059_785_726_484_725_46e+04,
    1.167_529_725_643_759_16e+05,
    4.762_772_841_467_309_63e+04,
];
#[allow(clippy::excessive_precision)]
const Q0_R: [f64; 6] = [
    0.0,
    7.324_218_749_999_350_52e-02,
    1.176_820_646_822_526_94e+01,
    5.576_733_802_564_018_56e+02,
    8.859_197_207_564_686_32e+03,
    3.701_462_679_871_854_38e+04,
];
#[allow(clippy::excessive_precision)]
const Q0_S: [f64; 6] = [
    1.637_760_268_956_898_24e+02,
    8.098_344_946_564_498_06e+03,
    1.425_382_914_191_204_76e+05,
    8.033_092_571_195_143_97e+05,
    8.405_015_798_190_605_13e+05,
    -3.438_992_935_378_666_15e+05,
];

fn p_zero(x: f64) -> f64 {
    let z = 1.0 / (x * x);
    let r = P0_R[0] + z * (P0_R[1] + z * (P0_R[2] + z * (P0_R[3] + z * (P0_R[4] + z * P0_R[5]))));
    let s = 1.0 + z * (P0_S[0] + z * (P0_S[1] + z * (P0_S[2] + z * (P0_S[3] + z * P0_S[4]))));
    1.0 + r / s
}

fn q_zero(x: f64) -> f64 {
    let z = 1.0 / (x * x);
    let r = Q0_R[0] + z * (Q0_R[1] + z * (Q0_R[2] + z * (Q0_R[3] + z * (Q0_R[4] + z * Q0_R[5]))));
    let s = 1.0
        + z * (Q0_S[0]
            + z * (Q0_S[1] + z * (Q0_S[2] + z * (Q0_S[3] + z * (Q0_S[4] + z * Q0_S[5])))));
    (-0.125 + r / s) / x
}

fn j0_asymptotic(x: f64) -> f64 {
    // J0(x) = sqrt(2/(pi x)) * (P0(x) cos(x - pi/4) - Q0(x) sin(x - pi/4)),
    // with sqrt(2) cos(x - pi/4) = cos x + sin x and
    //      sqrt(2) sin(x - pi/4) = sin x - cos x.
    let s = x.sin();
    let c = x.cos();
    let mut ss = s - c;
    let mut cc = s + c;
    // Rewrite the nearly cancelling sum via -cos(2x) = (s - c)(s + c).
    if x < 1.0e15 {
        let z = -(2.0 * x).cos();
        if s * c < 0.0 {
            cc = z / ss;
        } else {
            ss = z / cc;
        }
    }
    INV_SQRT_PI * (p_zero(x) * cc - q_zero(x) * ss) / x.sqrt()
}

/// Parameter m of the complete elliptic integral, validated to m < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::domain(format!(
                "EllipticParameter: non-finite parameter {m}"
            )));
        }
        if m >= 1.0 {
            return Err(Error::domain(format!(
                "EllipticParameter: K(m) diverges for m >= 1, got {m}"
            )));
        }
        Ok(EllipticParameter(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Complete elliptic integral of the first kind K(m), parameter convention.
///
/// Evaluated with the arithmetic-geometric mean, K(m) = π / (2·AGM(1, √(1−m))),
/// which stays accurate for m < 0 as well.
pub fn elliptic_k(m: EllipticParameter) -> f64 {
    let m = m.value();
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (a - b).abs() <= 4.0 * f64::EPSILON * an {
            a = an;
            break;
        }
        a = an;
        b = bn;
    }
    std::f64::consts::PI / (2.0 * a)
}

/// Mean of `f` under an exponential density with the given mean interval:
/// (1/T̄) ∫₀^∞ f(τ) e^{−τ/T̄} dτ.
///
/// The integral is truncated at 40·T̄ (where the weight has fallen below
/// 1e-17 of its peak) and evaluated by adaptive Simpson quadrature with
/// a relative tolerance of 1e-10.
pub fn exp_weighted_mean<F>(f: F, mean_interval: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(mean_interval.is_finite() && mean_interval > 0.0) {
        return Err(Error::domain(format!(
            "exp_weighted_mean: mean_interval must be positive, got {mean_interval}"
        )));
    }
    let tbar = mean_interval;
    let g = |t: f64| f(t) * (-t / tbar).exp() / tbar;
    let upper = 40.0 * tbar;
    integrate_adaptive(&g, 0.0, upper, 1e-10)
}

/// Adaptive Simpson integration of `g` over [a, b].
///
/// The range is pre-split into panels so oscillatory integrands cannot fool
/// the first convergence estimate; each panel is then refined recursively.
pub(crate) fn integrate_adaptive<F>(g: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    const PANELS: usize = 128;
    let h = (b - a) / PANELS as f64;

    // Coarse composite-Simpson pass to fix the absolute tolerance scale.
    let mut coarse = 0.0;
    let mut panel_data = Vec::with_capacity(PANELS);
    for i in 0..PANELS {
        let x0 = a + h * i as f64;
        let x1 = x0 + h;
        let xm = 0.5 * (x0 + x1);
        let (f0, fm, f1) = (g(x0), g(xm), g(x1));
        if !(f0.is_finite() && fm.is_finite() && f1.is_finite()) {
            return Err(Error::numerical(format!(
                "quadrature: integrand is non-finite on [{x0}, {x1}]"
            )));
        }
        let s = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        coarse += s;
        panel_data.push((x0, x1, f0, fm, f1, s));
    }
    let eps = (rel_tol * coarse.abs()).max(1e-16) / PANELS as f64;

    let mut total = 0.0;
    for (x0, x1, f0, fm, f1, s) in panel_data {
        total += simpson_refine(g, x0, x1, f0, fm, f1, s, eps, 40)?;
    }
    if !total.is_finite() {
        return Err(Error::numerical(format!(
            "quadrature over [{a}, {b}] produced a non-finite result"
        )));
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine<F>(
    g: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = g(lm);
    let frm = g(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(Error::numerical(format!(
            "quadrature: integrand is non-finite on [{a}, {b}]"
        )));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::numerical(format!(
            "adaptive quadrature failed to converge on [{a}, {b}] (residual {delta:e})"
        )));
    }
    Ok(
        simpson_refine(g, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?
            + simpson_refine(g, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Independent J0 oracle: trapezoidal rule on the integral representation
    /// J0(x) = (1/2π) ∫₀^{2π} cos(x sin θ) dθ. The integrand is entire and
    /// periodic, so the rule converges geometrically once the node count
    /// exceeds the oscillation scale.
    fn j0_oracle(x: f64) -> f64 {
        let n = 256 + 8 * (x.abs().ceil() as usize);
        let mut sum = 0.0;
        for k in 0..n {
            let theta = 2.0 * PI * k as f64 / n as f64;
            sum += (x * theta.sin()).cos();
        }
        sum / n as f64
    }

    /// Independent K oracle: composite Simpson on the defining integral.
    fn elliptic_k_oracle(m: f64) -> f64 {
        let n = 1 << 14;
        let h = FRAC_PI_2 / n as f64;
        let f = |theta: f64| (1.0 - m * theta.sin().powi(2)).powf(-0.5);
        let mut sum = f(0.0) + f(FRAC_PI_2);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(h * k as f64);
        }
        sum * h / 3.0
    }

    fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
        let err = (got - want).abs();
        assert!(
            err <= tol,
            "{what}: got {got}, want {want}, |err| = {err:e} > {tol:e}"
        );
    }

    #[test]
    fn j0_at_zero_is_one() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
    }

    #[test]
    fn j0_at_one_matches_series_value() {
        // Frozen from the integral-representation oracle.
        assert_close(
            bessel_j0(1.0).unwrap(),
            0.765_197_686_557_966_5,
            1e-12,
            "J0(1)",
        );
    }

    #[test]
    fn j0_first_zero_located_by_oracle_bisection() {
        // Bisect the oracle on [2, 3] to find the first zero, then check
        // the implementation vanishes there.
        let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
        assert!(j0_oracle(lo) > 0.0 && j0_oracle(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if j0_oracle(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let zero = 0.5 * (lo + hi);
        assert_close(zero, 2.404_825_557_695_773, 1e-9, "location of first zero");
        assert!(bessel_j0(zero).unwrap().abs() < 1e-9);
    }

    #[test]
    fn j0_matches_oracle_across_both_branches() {
        // Dense sweep spanning the series/asymptotic boundary at 8 and the
        // oscillatory region needed by the quadrature in `theory`.
        let mut x = 0.05;
        while x < 700.0 {
            let got = bessel_j0(x).unwrap();
            let want = j0_oracle(x);
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                "J0({x}): got {got}, oracle {want}"
            );
            x *= 1.07;
        }
    }

    #[test]
    fn j0_rejects_non_finite_input() {
        assert!(bessel_j0(f64::NAN).is_err());
        assert!(bessel_j0(f64::INFINITY).is_err());
    }

    #[test]
    fn elliptic_k_at_zero_is_half_pi() {
        let m = EllipticParameter::new(0.0).unwrap();
        assert_close(elliptic_k(m), FRAC_PI_2, 1e-15, "K(0)");
    }

    #[test]
    fn elliptic_k_at_half_matches_agm_value() {
        let m = EllipticParameter::new(0.5).unwrap();
        assert_close(elliptic_k(m), 1.854_074_677_301_372, 1e-12, "K(0.5)");
    }

    #[test]
    fn elliptic_k_negative_parameter_matches_quadrature() {
        // Operating point of the random-delay correlation model.
        let m = -7.7966;
        let got = elliptic_k(EllipticParameter::new(m).unwrap());
        let want = elliptic_k_oracle(m);
        assert_close(got, want, 1e-9 * want, "K(-7.7966) vs quadrature");
        assert_close(got, 0.848, 1e-3, "K(-7.7966) headline value");
    }

    #[test]
    fn elliptic_k_matches_quadrature_over_range() {
        for &m in &[-200.0, -50.0, -7.7966, -1.0, -0.1, 0.1, 0.5, 0.9] {
            let got = elliptic_k(EllipticParameter::new(m).unwrap());
            let want = elliptic_k_oracle(m);
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "K({m}): got {got}, quadrature {want}"
            );
        }
    }

    #[test]
    fn elliptic_k_tends_to_half_pi_from_either_side() {
        for &m in &[-1e-12, 1e-12] {
            let k = elliptic_k(EllipticParameter::new(m).unwrap());
            assert_close(k, FRAC_PI_2, 1e-11, "K(m) near 0");
        }
    }

    #[test]
    fn elliptic_parameter_rejects_divergent_values() {
        assert!(EllipticParameter::new(1.0).is_err());
        assert!(EllipticParameter::new(1.5).is_err());
        assert!(EllipticParameter::new(f64::NAN).is_err());
        assert!(EllipticParameter::new(0.999_999).is_ok());
    }

    #[test]
    fn exp_weighted_mean_normalizes_constants() {
        for &tbar in &[0.001, 0.02, 1.0, 37.5] {
            let got = exp_weighted_mean(|_| 1.0, tbar).unwrap();
            assert_close(got, 1.0, 1e-9, "exponential density normalization");
        }
    }

    #[test]
    fn exp_weighted_mean_of_identity_is_the_mean() {
        let got = exp_weighted_mean(|t| t, 0.02).unwrap();
        assert_close(got, 0.02, 1e-9 * 0.02, "mean of Exp(1/0.02)");
    }

    #[test]
    fn exp_weighted_mean_of_squared_j0_matches_elliptic_form() {
        // One spot check of the identity exercised in full by the
        // acceptance suite: E[J0(2π f_d τ)²] = (2/π) K(−16π² f_d² T̄²).
        let fd = 5.555_555_555_555_555;
        let tbar = 0.04;
        let got = exp_weighted_mean(|t| j0(2.0 * PI * fd * t).powi(2), tbar).unwrap();
        let m = -16.0 * PI * PI * fd * fd * tbar * tbar;
        let want = 2.0 / PI * elliptic_k(EllipticParameter::new(m).unwrap());
        assert!(((got - want) / want).abs() < 1e-8, "got {got}, want {want}");
        assert_close(got, 0.540_430_917_245, 1e-6, "operating-point value");
    }

    #[test]
    fn exp_weighted_mean_rejects_bad_interval() {
        assert!(exp_weighted_mean(|_| 1.0, 0.0).is_err());
        assert!(exp_weighted_mean(|_| 1.0, -0.5).is_err());
        assert!(exp_weighted_mean(|_| 1.0, f64::NAN).is_err());
    }

    #[test]
    fn exp_weighted_mean_reports_non_finite_integrands() {
        let err = exp_weighted_mean(|t| 1.0 / t, 0.5).unwrap_err();
        assert!(err.to_string().contains("non-finite"), "{err}");
        assert!(exp_weighted_mean(|_| f64::NAN, 0.5).is_err());
        // The zero function integrates cleanly to zero.
        assert_eq!(exp_weighted_mean(|_| 0.0, 0.5).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn j0_is_even_and_bounded(x in -100.0f64..100.0) {
            let v = bessel_j0(x).unwrap();
            prop_assert!(v.abs() <= 1.0 + 1e-15);
            prop_assert_eq!(v, bessel_j0(-x).unwrap());
        }

        #[test]
        fn elliptic_k_is_strictly_increasing(
            a in -100.0f64..0.99,
            gap in 1e-6f64..10.0,
        ) {
            let m1 = a;
            let m2 = (a + gap).min(0.995);
            prop_assume!(m1 < m2);
            let k1 = elliptic_k(EllipticParameter::new(m1).unwrap());
            let k2 = elliptic_k(EllipticParameter::new(m2).unwrap());
            prop_assert!(k1 < k2, "K({}) = {} !< K({}) = {}", m1, k1, m2, k2);
        }
    }
}
