use crate::math::{LN_2PI, PI};
use crate::{Error, Result};

use super::special::log_bessel_i0;

/// Circular likelihood parameters. `sigma2` is the inverse concentration.
///
/// The density is `exp(cos(φ - π - μ)/σ²) / (2π I₀(1/σ²))`, which peaks at
/// `φ = μ + π`. With `μ = π` the peak sits on the seam of `[0, 2π)` and
/// shows up as two half peaks on a linear chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VonMisesParams {
    mu: f64,
    sigma2: f64,
    log_norm: f64,
}

impl VonMisesParams {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::Domain {
                what: "von Mises mean",
                value: mu,
            });
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain {
                what: "von Mises variance",
                value: sigma2,
            });
        }
        let log_norm = LN_2PI + log_bessel_i0(1.0 / sigma2)?;
        Ok(Self {
            mu,
            sigma2,
            log_norm,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// `ln(2π I₀(1/σ²))`
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }
}

pub fn log_von_mises(phi: f64, p: &VonMisesParams) -> f64 {
    libm::cos(phi - PI - p.mu) / p.sigma2 - p.log_norm
}

/// Product of independent circular factors, one per angle.
pub fn log_torus(theta: &[f64], params: &[VonMisesParams]) -> Result<f64> {
    if theta.len() != params.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            got: theta.len(),
        });
    }
    Ok(theta
        .iter()
        .zip(params)
        .map(|(&t, p)| log_von_mises(t, p))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::TAU;
    use proptest::prelude::*;

    fn i0_linear(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= (x / 2.0) * (x / 2.0) / (k as f64 * k as f64);
            sum += term;
        }
        sum
    }

    fn trapezoid_circle(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        // periodic integrand: trapezoid == rectangle over one period
        let h = TAU / n as f64;
        (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
    }

    #[test]
    fn peak_value() {
        let p = VonMisesParams::new(0.0, 0.25).unwrap();
        let want = (4f64.exp() / (TAU * i0_linear(4.0))).ln();
        assert!((log_von_mises(PI, &p) - want).abs() < 1e-13);
        assert!((log_von_mises(PI, &p).exp() - 0.768_857_323_404_653).abs() < 1e-12);
        assert!((log_von_mises(PI, &p) - log_von_mises(0.0, &p) - 8.0).abs() < 1e-13);
    }

    #[test]
    fn normalized_on_circle() {
        for (mu, s2) in [(0.0, 0.25), (PI, 0.25), (1.3, 0.05), (0.0, 4.0)] {
            let p = VonMisesParams::new(mu, s2).unwrap();
            let z = trapezoid_circle(|x| log_von_mises(x, &p).exp(), 10_000);
            assert!((z - 1.0).abs() < 1e-8, "mu={mu} s2={s2}: {z}");
        }
    }

    #[test]
    fn torus_examples() {
        let p = VonMisesParams::new(0.0, 0.25).unwrap();
        assert_eq!(log_torus(&[1.1], &[p]).unwrap(), log_von_mises(1.1, &p));
        let six = log_torus(&[PI; 6], &[p; 6]).unwrap();
        assert!((six - 6.0 * log_von_mises(PI, &p)).abs() < 1e-12);
        assert!(log_torus(&[0.0, 1.0], &[p]).is_err());

        let n = 400;
        let h = TAU / n as f64;
        let mut z = 0.0;
        for i in 0..n {
            for j in 0..n {
                z += log_torus(&[i as f64 * h, j as f64 * h], &[p, p])
                    .unwrap()
                    .exp()
                    * h
                    * h;
            }
        }
        assert!((z - 1.0).abs() < 1e-6, "{z}");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(VonMisesParams::new(0.0, 0.0).is_err());
        assert!(VonMisesParams::new(0.0, -1.0).is_err());
        assert!(VonMisesParams::new(f64::NAN, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn periodic_and_bounded(phi in -50f64..50.0, mu in -4f64..4.0, s2 in 0.05f64..5.0) {
            let p = VonMisesParams::new(mu, s2).unwrap();
            let a = log_von_mises(phi, &p);
            prop_assert!((a - log_von_mises(phi + TAU, &p)).abs() < 1e-10);
            let peak = log_von_mises(mu + PI, &p);
            let trough = log_von_mises(mu, &p);
            prop_assert!((peak - trough - 2.0 / s2).abs() < 1e-9);
            prop_assert!(trough - 1e-12 <= a && a <= peak + 1e-12);
        }

        #[test]
        fn torus_permutation_equivariant(t in proptest::collection::vec(0f64..TAU, 3), mus in proptest::collection::vec(-3f64..3.0, 3)) {
            let ps: alloc::vec::Vec<_> = mus.iter().enumerate()
                .map(|(i, &m)| VonMisesParams::new(m, 0.1 + i as f64).unwrap()).collect();
            let a = log_torus(&t, &ps).unwrap();
            let b = log_torus(&[t[2], t[0], t[1]], &[ps[2], ps[0], ps[1]]).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
