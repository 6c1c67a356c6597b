use crate::math::PI;
use crate::{Error, Result};

/// One-dimensional prior. Both variants are normalized on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prior {
    /// Constant density `1/(hi - lo)`.
    Uniform { lo: f64, hi: f64 },
    /// `π/(2(hi-lo)) · sin(π(x-lo)/(hi-lo))`; on `[0, π]` this is `sin θ / 2`,
    /// the zenith marginal of a uniform distribution on the sphere.
    Sinusoidal { lo: f64, hi: f64 },
}

impl Prior {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        check_bounds(lo, hi)?;
        Ok(Prior::Uniform { lo, hi })
    }

    pub fn sinusoidal(lo: f64, hi: f64) -> Result<Self> {
        check_bounds(lo, hi)?;
        Ok(Prior::Sinusoidal { lo, hi })
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Prior::Uniform { lo, hi } | Prior::Sinusoidal { lo, hi } => (lo, hi),
        }
    }

    /// Log density; `-∞` outside `[lo, hi]`.
    pub fn log_density(&self, x: f64) -> f64 {
        let (lo, hi) = self.bounds();
        if !(lo <= x && x <= hi) {
            return f64::NEG_INFINITY;
        }
        let width = hi - lo;
        match self {
            Prior::Uniform { .. } => -libm::log(width),
            Prior::Sinusoidal { .. } => {
                let s = libm::sin(PI * (x - lo) / width);
                if s <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    libm::log(PI / (2.0 * width)) + libm::log(s)
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.bounds();
        let u = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        match self {
            Prior::Uniform { .. } => u,
            Prior::Sinusoidal { .. } => 0.5 * (1.0 - libm::cos(PI * u)),
        }
    }

    /// Maps `u ∈ [0, 1]` to a prior draw.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let (lo, hi) = self.bounds();
        let width = hi - lo;
        let x = match self {
            Prior::Uniform { .. } => lo + width * u,
            Prior::Sinusoidal { .. } => {
                lo + width / PI * libm::acos((1.0 - 2.0 * u).clamp(-1.0, 1.0))
            }
        };
        x.clamp(lo, hi)
    }
}

fn check_bounds(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::InvalidBounds { lo, hi })
    }
}

/// Sum of per-dimension log densities.
pub fn log_prior_density(prior: &[Prior], theta: &[f64]) -> Result<f64> {
    if prior.len() != theta.len() {
        return Err(Error::DimensionMismatch {
            expected: prior.len(),
            got: theta.len(),
        });
    }
    Ok(prior
        .iter()
        .zip(theta)
        .map(|(p, &x)| p.log_density(x))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::TAU;

    fn midpoint_integral(p: &Prior, n: usize) -> f64 {
        let (lo, hi) = p.bounds();
        let h = (hi - lo) / n as f64;
        (0..n)
            .map(|i| p.log_density(lo + (i as f64 + 0.5) * h).exp() * h)
            .sum()
    }

    #[test]
    fn examples() {
        let u = Prior::uniform(0.0, TAU).unwrap();
        assert!((log_prior_density(&[u], &[1.0]).unwrap() + 1.837_877_066_409_345).abs() < 1e-12);
        let s = Prior::sinusoidal(0.0, PI).unwrap();
        assert!((s.log_density(PI / 2.0) - 0.5f64.ln()).abs() < 1e-15);
        let u01 = Prior::uniform(0.0, 1.0).unwrap();
        assert_eq!(u01.log_density(1.5), f64::NEG_INFINITY);
        assert_eq!(
            log_prior_density(&[u01], &[0.1, 0.2]),
            Err(Error::DimensionMismatch {
                expected: 1,
                got: 2
            })
        );
        assert!(Prior::uniform(1.0, 1.0).is_err());
    }

    #[test]
    fn densities_integrate_to_one() {
        for p in [
            Prior::uniform(-3.0, 5.0).unwrap(),
            Prior::sinusoidal(0.0, PI).unwrap(),
            Prior::sinusoidal(1.0, 4.0).unwrap(),
        ] {
            assert!(
                (midpoint_integral(&p, 200_000) - 1.0).abs() < 1e-10,
                "{p:?}"
            );
        }
    }

    #[test]
    fn inverse_cdf_inverts_cdf() {
        let s = Prior::sinusoidal(0.0, PI).unwrap();
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            assert!((s.cdf(s.inverse_cdf(u)) - u).abs() < 1e-12);
        }
        assert!((s.inverse_cdf(0.5) - PI / 2.0).abs() < 1e-15);
        assert_eq!(s.inverse_cdf(0.0), 0.0);
    }
}
