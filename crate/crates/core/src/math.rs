//! Log-space helpers shared by the densities and the evidence bookkeeping.

pub use core::f64::consts::{PI, TAU};

/// `ln(2π)`
pub const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// `ln Σ e^{x_i}`, max-shifted. Empty input gives `-∞`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    let sum: f64 = xs.iter().map(|&x| libm::exp(x - max)).sum();
    max + libm::log(sum)
}

/// Streaming `ln Σ e^{x_i}` for sums too long to buffer (grid quadrature).
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += libm::exp(x - self.max);
        } else {
            self.scaled = self.scaled * libm::exp(self.max - x) + 1.0;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + libm::log(self.scaled)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_handles_infinities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
        assert_eq!(log_add_exp(-2.0, f64::NEG_INFINITY), -2.0);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        // would overflow in linear space
        assert!((log_add_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn streaming_matches_batch() {
        let xs = [-800.0, -3.5, 2.0, 700.0, 699.0, -1e300];
        let mut acc = LogSumExp::default();
        xs.iter().for_each(|&x| acc.add(x));
        assert!((acc.value() - log_sum_exp(&xs)).abs() < 1e-12);
        assert_eq!(LogSumExp::default().value(), f64::NEG_INFINITY);
    }

    #[test]
    fn ln_2pi_constant() {
        assert_eq!(LN_2PI, (2.0 * PI).ln());
    }
}
