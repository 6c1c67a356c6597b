//! Modified Bessel functions of the first kind, evaluated from their power
//! series in log space. All terms are positive so the series is free of
//! cancellation; the orders and arguments used here (ν ≤ ~100, x ≤ ~100)
//! keep it short.

use crate::math::LogSumExp;
use crate::{Error, Result};

const MAX_TERMS: usize = 10_000;
const REL_TOL_LN: f64 = -39.143_946_580_898_78; // ln(1e-17)

/// `ln I_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
///
/// `I_ν(x) = Σ_k (x/2)^{2k+ν} / (k! Γ(k+ν+1))`
pub fn log_bessel_i(order: f64, x: f64) -> Result<f64> {
    if !(order >= 0.0 && order.is_finite()) {
        return Err(Error::Domain {
            what: "Bessel order",
            value: order,
        });
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain {
            what: "Bessel argument",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(if order == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let ln_half_x = libm::log(0.5 * x);
    let mut term = order * ln_half_x - libm::lgamma(order + 1.0);
    let mut sum = LogSumExp::default();
    sum.add(term);
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next = term + 2.0 * ln_half_x - libm::log(kf + 1.0) - libm::log(kf + 1.0 + order);
        let decreasing = next < term;
        term = next;
        sum.add(term);
        if decreasing && term - sum.value() < REL_TOL_LN {
            return Ok(sum.value());
        }
    }
    Err(Error::SeriesNotConverged { terms: MAX_TERMS })
}

/// `ln I₀(x)`.
pub fn log_bessel_i0(x: f64) -> Result<f64> {
    log_bessel_i(0.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: the I₀ series summed in linear space.
    fn i0_linear(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn i0_matches_linear_series() {
        for &x in &[0.1, 1.0, 4.0, 10.0, 20.0] {
            let got = log_bessel_i0(x).unwrap();
            let want = i0_linear(x).ln();
            assert!((got - want).abs() < 1e-13, "x={x}: {got} vs {want}");
        }
        // tabulated I₀(4) = 11.301921952136330
        assert!((log_bessel_i0(4.0).unwrap().exp() - 11.301_921_952_136_33).abs() < 1e-11);
    }

    #[test]
    fn half_order_closed_form() {
        // I_{1/2}(x) = sqrt(2/(πx)) sinh x
        for &x in &[0.5, 2.0, 10.0, 50.0, 100.0] {
            let want = 0.5 * (2.0 / (core::f64::consts::PI * x)).ln()
                + x
                + (-(-2.0 * x).exp()).ln_1p()
                - 2f64.ln();
            let got = log_bessel_i(0.5, x).unwrap();
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn recurrence_between_orders() {
        // I_{ν-1}(x) - I_{ν+1}(x) = (2ν/x) I_ν(x)
        let x = 100.0;
        for &nu in &[2.5, 10.5, 40.5] {
            let lo = log_bessel_i(nu - 1.0, x).unwrap();
            let mid = log_bessel_i(nu, x).unwrap();
            let hi = log_bessel_i(nu + 1.0, x).unwrap();
            let lhs = (lo - mid).exp() - (hi - mid).exp();
            assert!((lhs - 2.0 * nu / x).abs() < 1e-9, "nu={nu}: {lhs}");
        }
    }

    #[test]
    fn edge_cases() {
        assert_eq!(log_bessel_i0(0.0).unwrap(), 0.0);
        assert_eq!(log_bessel_i(1.5, 0.0).unwrap(), f64::NEG_INFINITY);
        assert!(log_bessel_i(-1.0, 1.0).is_err());
        assert!(log_bessel_i(0.0, -1.0).is_err());
        assert!(log_bessel_i(0.0, f64::NAN).is_err());
    }
}
