use crate::geometry::{sph_to_cart, UnitVector3};
use crate::math::{log_sum_exp, LogSumExp, PI};
use crate::{Error, Result};

use super::special::log_bessel_i;

const MAX_TERMS: usize = 200;
const REL_TOL_LN: f64 = -34.538776394910684; // ln(1e-15)
const ORTHO_TOL: f64 = 1e-12;

/// Kent (five-parameter Fisher–Bingham) distribution on the unit sphere.
///
/// `gammas[0]` is the mean direction, `gammas[1]` and `gammas[2]` the major
/// and minor axes. Validity is `2β ≤ κ`; equality is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KentParams {
    kappa: f64,
    beta: f64,
    gammas: [[f64; 3]; 3],
    log_norm: f64,
}

impl KentParams {
    /// `frame` is the orientation matrix written row by row; its columns are
    /// the mean, major and minor axis vectors.
    pub fn new(kappa: f64, beta: f64, frame: [[f64; 3]; 3]) -> Result<Self> {
        let gammas = [0, 1, 2].map(|j| [frame[0][j], frame[1][j], frame[2][j]]);
        for a in 0..3 {
            for b in 0..3 {
                let dot: f64 = (0..3).map(|k| gammas[a][k] * gammas[b][k]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                if !((dot - want).abs() <= ORTHO_TOL) {
                    return Err(Error::InvalidModel("Kent frame is not orthogonal"));
                }
            }
        }
        let log_norm = kent_log_norm(kappa, beta)?;
        Ok(Self {
            kappa,
            beta,
            gammas,
            log_norm,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gammas(&self) -> &[[f64; 3]; 3] {
        &self.gammas
    }

    /// `ln c(κ, β)`
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }
}

/// `ln c(κ, β)` where
/// `c = 2π Σ_i Γ(i+½)/Γ(i+1) β^{2i} (κ/2)^{-2i-½} I_{2i+½}(κ)`,
/// truncated once a term drops below `1e-15` of the partial sum.
pub fn kent_log_norm(kappa: f64, beta: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain {
            what: "Kent concentration",
            value: kappa,
        });
    }
    if !(beta >= 0.0 && 2.0 * beta <= kappa) {
        return Err(Error::Domain {
            what: "Kent ellipticity",
            value: beta,
        });
    }
    let ln_2pi = libm::log(2.0 * PI);
    let ln_half_kappa = libm::log(0.5 * kappa);
    let term = |i: usize| -> Result<f64> {
        let fi = i as f64;
        let beta_pow = if i == 0 {
            0.0
        } else {
            2.0 * fi * libm::log(beta)
        };
        Ok(libm::lgamma(fi + 0.5) - libm::lgamma(fi + 1.0) + beta_pow
            - (2.0 * fi + 0.5) * ln_half_kappa
            + log_bessel_i(2.0 * fi + 0.5, kappa)?)
    };
    let mut sum = LogSumExp::default();
    sum.add(term(0)?);
    if beta == 0.0 {
        return Ok(ln_2pi + sum.value());
    }
    let mut prev = term(0)?;
    for i in 1..MAX_TERMS {
        let t = term(i)?;
        sum.add(t);
        if t < prev && t - sum.value() < REL_TOL_LN {
            return Ok(ln_2pi + sum.value());
        }
        prev = t;
    }
    Err(Error::SeriesNotConverged { terms: MAX_TERMS })
}

/// `κ γ₁·x + β[(γ₂·x)² − (γ₃·x)²] − ln c(κ, β)`
pub fn log_kent(x: UnitVector3, p: &KentParams) -> f64 {
    let [g1, g2, g3] = p.gammas;
    let (a, b, c) = (x.dot(g1), x.dot(g2), x.dot(g3));
    p.kappa * a + p.beta * (b * b - c * c) - p.log_norm
}

/// Orientation matrices of the four components of the flower density. All
/// share the north pole as mean direction; the major axes sit at azimuths
/// 90°, 0°, 135° and 45°.
pub fn flower_frames() -> [[[f64; 3]; 3]; 4] {
    let r = core::f64::consts::FRAC_1_SQRT_2;
    [
        [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
        [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
        [[0.0, -r, r], [0.0, r, r], [1.0, 0.0, 0.0]],
        [[0.0, r, -r], [0.0, r, r], [1.0, 0.0, 0.0]],
    ]
}

pub const FLOWER_KAPPA: f64 = 100.0;
pub const FLOWER_BETA: f64 = 50.0;

/// The four Kent components of the canonical flower (κ = 100, β = 50).
pub fn flower_components() -> [KentParams; 4] {
    flower_frames().map(|g| {
        KentParams::new(FLOWER_KAPPA, FLOWER_BETA, g)
            .expect("canonical flower parameters are valid")
    })
}

/// Log of the unweighted sum of Kent densities at `(φ, θ)`.
pub fn log_flower(phi: f64, theta: f64, components: &[KentParams]) -> f64 {
    let x = sph_to_cart(phi, theta);
    match components {
        [a, b, c, d] => log_sum_exp(&[
            log_kent(x, a),
            log_kent(x, b),
            log_kent(x, c),
            log_kent(x, d),
        ]),
        _ => {
            let mut acc = LogSumExp::default();
            components.iter().for_each(|k| acc.add(log_kent(x, k)));
            acc.value()
        }
    }
}
