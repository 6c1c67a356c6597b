//! The toy models, addressable by key: `circle`, `torus<n>` (n ≥ 2) and
//! `sphere<m>` (m spheres, 2m dimensions).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::geometry::ParameterSpace;
use crate::math::{PI, TAU};
use crate::{Error, Result};

use super::kent::{flower_components, log_flower, KentParams};
use super::model::{LogLikelihood, Model};
use super::prior::Prior;
use super::von_mises::{log_von_mises, VonMisesParams};

/// Variance of every circular factor.
pub const CIRCLE_SIGMA2: f64 = 0.25;

/// Mean of every circular factor. With the built-in π offset of the density
/// this puts the peak on the 0/2π seam: a wrapped half peak per angle and a
/// quarter peak per corner of every 2-D chart.
pub const CIRCLE_MU: f64 = PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKey {
    Circle,
    Torus(usize),
    Sphere(usize),
}

impl FromStr for ModelKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownModel(s.to_string());
        if s == "circle" {
            return Ok(ModelKey::Circle);
        }
        let count = |rest: &str| -> Result<usize> {
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(unknown());
            }
            rest.parse().map_err(|_| unknown())
        };
        if let Some(rest) = s.strip_prefix("torus") {
            let n = count(rest)?;
            return if n >= 2 {
                Ok(ModelKey::Torus(n))
            } else {
                Err(unknown())
            };
        }
        if let Some(rest) = s.strip_prefix("sphere") {
            let m = count(rest)?;
            return if m >= 1 {
                Ok(ModelKey::Sphere(m))
            } else {
                Err(unknown())
            };
        }
        Err(unknown())
    }
}

impl fmt::Display for ModelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKey::Circle => f.write_str("circle"),
            ModelKey::Torus(n) => write!(f, "torus{n}"),
            ModelKey::Sphere(m) => write!(f, "sphere{m}"),
        }
    }
}

impl ModelKey {
    pub fn build(self) -> Model {
        match self {
            ModelKey::Circle => circle_model(),
            ModelKey::Torus(n) => torus_model(n),
            ModelKey::Sphere(m) => sphere_model(m),
        }
    }

    /// Exact log-evidence: every likelihood factor is a normalized density
    /// and the priors are normalized, so `Z = Π (1/2π)` per angle and
    /// `Z = 1/π` per sphere (four unit-mass Kents against `1/(4π)` per unit
    /// solid angle).
    pub fn analytic_log_evidence(self) -> f64 {
        match self {
            ModelKey::Circle => -libm::log(TAU),
            ModelKey::Torus(n) => -(n as f64) * libm::log(TAU),
            ModelKey::Sphere(m) => -(m as f64) * libm::log(PI),
        }
    }
}

pub fn model_from_key(key: &str) -> Result<Model> {
    Ok(key.parse::<ModelKey>()?.build())
}

/// Product of von Mises factors, one per coordinate.
#[derive(Debug, Clone)]
pub struct TorusLikelihood {
    params: Vec<VonMisesParams>,
}

impl TorusLikelihood {
    pub fn new(params: Vec<VonMisesParams>) -> Self {
        Self { params }
    }
}

impl LogLikelihood for TorusLikelihood {
    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        theta
            .iter()
            .zip(&self.params)
            .map(|(&t, p)| log_von_mises(t, p))
            .sum()
    }
}

/// Independent flower densities on consecutive `(φ, θ)` pairs.
#[derive(Debug, Clone)]
pub struct FlowerLikelihood {
    components: [KentParams; 4],
}

impl FlowerLikelihood {
    pub fn new(components: [KentParams; 4]) -> Self {
        Self { components }
    }
}

impl LogLikelihood for FlowerLikelihood {
    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        theta
            .chunks_exact(2)
            .map(|pair| log_flower(pair[0], pair[1], &self.components))
            .sum()
    }
}

fn torus_impl(n: usize) -> Model {
    let vm = VonMisesParams::new(CIRCLE_MU, CIRCLE_SIGMA2).expect("valid canonical von Mises");
    let space = ParameterSpace::circular(n, 0.0, TAU).expect("n >= 1");
    let prior = alloc::vec![Prior::Uniform { lo: 0.0, hi: TAU }; n];
    Model::new(space, prior, TorusLikelihood::new(alloc::vec![vm; n])).expect("consistent model")
}

/// One circular parameter on `[0, 2π)`, uniform prior, von Mises likelihood.
pub fn circle_model() -> Model {
    let model = torus_impl(1);
    let names = alloc::vec![super::ParamName {
        name: String::from("phi"),
        label: String::from("\\phi"),
    }];
    model.with_names(names).expect("one name")
}

/// `n` independent circular parameters.
pub fn torus_model(n: usize) -> Model {
    let model = torus_impl(n);
    let names = (1..=n)
        .map(|i| super::ParamName {
            name: alloc::format!("theta{i}"),
            label: alloc::format!("\\theta_{{{i}}}"),
        })
        .collect();
    model.with_names(names).expect("n names")
}

/// `m` spheres, each with a uniform azimuth prior, a sinusoidal zenith prior
/// and the four-component flower likelihood.
pub fn sphere_model(m: usize) -> Model {
    let space = ParameterSpace::spheres(m).expect("m >= 1");
    let prior = (0..m)
        .flat_map(|_| {
            [
                Prior::Uniform { lo: 0.0, hi: TAU },
                Prior::Sinusoidal { lo: 0.0, hi: PI },
            ]
        })
        .collect();
    Model::new(space, prior, FlowerLikelihood::new(flower_components())).expect("consistent model")
}
