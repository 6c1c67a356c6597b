use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{DimensionKind, ParameterSpace};
use crate::{Error, Result};

use super::prior::Prior;

/// Log-likelihood over a parameter vector. Must be pure: the sampler may
/// evaluate it from several threads against a frozen livepoint snapshot.
pub trait LogLikelihood: Send + Sync {
    fn log_likelihood(&self, theta: &[f64]) -> f64;
}

impl<F> LogLikelihood for F
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        self(theta)
    }
}

/// Parameter name and its LaTeX label, as written to `.paramnames` files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamName {
    pub name: String,
    pub label: String,
}

/// Prior and likelihood over a parameter space.
pub struct Model {
    space: ParameterSpace,
    prior: Vec<Prior>,
    likelihood: Box<dyn LogLikelihood>,
    names: Vec<ParamName>,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model")
            .field("space", &self.space)
            .field("prior", &self.prior)
            .field("names", &self.names)
            .finish_non_exhaustive()
    }
}

impl Model {
    /// Each prior's support must coincide with its dimension's domain, and
    /// sinusoidal priors may only sit on sphere zenith angles.
    pub fn new(
        space: ParameterSpace,
        prior: Vec<Prior>,
        likelihood: impl LogLikelihood + 'static,
    ) -> Result<Self> {
        if prior.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                got: prior.len(),
            });
        }
        for (kind, p) in space.dims().iter().zip(&prior) {
            let (lo, hi) = kind.bounds();
            let (plo, phi) = p.bounds();
            let tol = 1e-12 * (hi - lo);
            if (lo - plo).abs() > tol || (hi - phi).abs() > tol {
                return Err(Error::InvalidModel(
                    "prior support differs from dimension domain",
                ));
            }
            if matches!(p, Prior::Sinusoidal { .. })
                && !matches!(kind, DimensionKind::SphereZenith { .. })
            {
                return Err(Error::InvalidModel(
                    "sinusoidal prior on a non-zenith dimension",
                ));
            }
        }
        let names = default_names(&space);
        Ok(Self {
            space,
            prior,
            likelihood: Box::new(likelihood),
            names,
        })
    }

    pub fn with_names(mut self, names: Vec<ParamName>) -> Result<Self> {
        if names.len() != self.space.len() {
            return Err(Error::DimensionMismatch {
                expected: self.space.len(),
                got: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    pub fn space(&self) -> &ParameterSpace {
        &self.space
    }

    pub fn prior(&self) -> &[Prior] {
        &self.prior
    }

    pub fn names(&self) -> &[ParamName] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn log_likelihood(&self, theta: &[f64]) -> f64 {
        self.likelihood.log_likelihood(theta)
    }

    /// Joint prior log density in coordinate measure; `-∞` off the support.
    pub fn log_prior(&self, theta: &[f64]) -> f64 {
        self.prior
            .iter()
            .zip(theta)
            .map(|(p, &x)| p.log_density(x))
            .sum()
    }
}

fn default_names(space: &ParameterSpace) -> Vec<ParamName> {
    let mut sphere = 0;
    space
        .dims()
        .iter()
        .enumerate()
        .map(|(i, d)| match d {
            DimensionKind::SphereAzimuth { .. } => {
                sphere += 1;
                ParamName {
                    name: format!("phi{sphere}"),
                    label: format!("\\phi_{{{sphere}}}"),
                }
            }
            DimensionKind::SphereZenith { .. } => ParamName {
                name: format!("theta{sphere}"),
                label: format!("\\theta_{{{sphere}}}"),
            },
            _ => ParamName {
                name: format!("x{}", i + 1),
                label: format!("x_{{{}}}", i + 1),
            },
        })
        .collect()
}
