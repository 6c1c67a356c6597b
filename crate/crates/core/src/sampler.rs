//! Likelihood-constrained Metropolis sampling.
//!
//! A chain starts at a random livepoint and takes a fixed number of trial
//! steps (accepted and rejected both count). A trial is accepted with
//! probability `min(π(θ_t)/π(θ_l), 1)` if its likelihood beats the current
//! threshold and is rejected otherwise. The final accepted state replaces
//! the evicted livepoint.
//!
//! Two proposal modes exist:
//!
//! * [`ProposalMode::Vanilla`]: every coordinate takes a Gaussian step in
//!   its own chart. Steps that leave the support are rejected. The trial
//!   width adapts between chains.
//! * [`ProposalMode::Geometric`]: circular coordinates take a wrapped
//!   Gaussian step, and each sphere `(φ, θ)` takes an isotropic Gaussian step
//!   in Cartesian space that is projected back onto the sphere. Widths are
//!   fixed.
//!
//! The sphere move is symmetric with respect to solid angle, not `dφ dθ`, so
//! in geometric mode the prior ratio for a sphere pair is taken per unit
//! solid angle (see [`log_prior_for_mode`]). For the sinusoidal zenith prior
//! that ratio is 1.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::distributions::{Model, Prior};
use crate::geometry::{cart_to_sph, sph_to_cart, wrap, DimensionKind, ParameterSpace};
use crate::nested::LivePointSet;
use crate::{Error, Result};

/// Default for [`ProposalConfig::max_restarts`].
pub const MAX_RESTARTS: usize = 1000;

/// Redraws allowed when a sphere step lands exactly on the origin.
pub const MAX_SPHERE_RETRIES: usize = 100;

/// Relative width substituted when all livepoints agree in a coordinate.
pub const DEGENERATE_RANGE_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProposalMode {
    Vanilla,
    #[default]
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProposalConfig {
    pub mode: ProposalMode,
    /// Trial steps per chain, per dimension.
    pub nt_multiplier: usize,
    /// Per-axis variance of the Cartesian sphere step.
    pub sigma_cart2: f64,
    /// Trial width as a fraction of the livepoint range.
    pub linear_sigma_scale: f64,
    /// Adapt the trial width between chains (vanilla mode only).
    pub adapt_vanilla_sigma: bool,
    /// Chains that accept nothing are restarted from another livepoint at
    /// most this many times before the sampler gives up.
    pub max_restarts: usize,
}

impl Default for ProposalConfig {
    fn default() -> Self {
        Self {
            mode: ProposalMode::Geometric,
            nt_multiplier: 20,
            sigma_cart2: 0.04,
            linear_sigma_scale: 0.1,
            adapt_vanilla_sigma: true,
            max_restarts: MAX_RESTARTS,
        }
    }
}

impl ProposalConfig {
    pub fn vanilla() -> Self {
        Self {
            mode: ProposalMode::Vanilla,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nt_multiplier == 0 {
            return Err(Error::InvalidConfig("nt_multiplier must be at least 1"));
        }
        if !(self.sigma_cart2 > 0.0 && self.sigma_cart2.is_finite()) {
            return Err(Error::InvalidConfig("sigma_cart2 must be positive"));
        }
        if !(self.linear_sigma_scale > 0.0 && self.linear_sigma_scale.is_finite()) {
            return Err(Error::InvalidConfig("linear_sigma_scale must be positive"));
        }
        Ok(())
    }
}

/// Result of one successful chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutcome {
    pub new_point: Vec<f64>,
    pub new_loglike: f64,
    pub n_accepted: usize,
    pub n_rejected: usize,
    /// Chains discarded before this one for accepting nothing.
    pub restarts: usize,
}

impl ChainOutcome {
    pub fn acceptance_rate(&self) -> f64 {
        self.n_accepted as f64 / (self.n_accepted + self.n_rejected) as f64
    }
}

/// Per-coordinate trial standard deviations.
///
/// Linear and circular coordinates (and, in vanilla mode, sphere angles)
/// get `linear_sigma_scale × (max − min)` over the livepoints, falling back
/// to `1e-3 × (hi − lo)` when the range collapses. In geometric mode both
/// angles of a sphere carry the fixed Cartesian `sqrt(sigma_cart2)`.
pub fn trial_sigma_per_dim(
    live: &LivePointSet,
    space: &ParameterSpace,
    cfg: &ProposalConfig,
) -> Result<Vec<f64>> {
    if live.is_empty() {
        return Err(Error::TooFewLivePoints { n: 0 });
    }
    let cart_sigma = libm::sqrt(cfg.sigma_cart2);
    let sigmas = space
        .dims()
        .iter()
        .enumerate()
        .map(|(i, kind)| {
            if cfg.mode == ProposalMode::Geometric && kind.is_sphere() {
                return cart_sigma;
            }
            let (min, max) = live
                .points()
                .iter()
                .map(|p| p[i])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                    (lo.min(x), hi.max(x))
                });
            let range = libm::fabs(max - min);
            if range > 0.0 {
                cfg.linear_sigma_scale * range
            } else {
                DEGENERATE_RANGE_FRACTION * kind.width()
            }
        })
        .collect();
    Ok(sigmas)
}

/// Draws a trial point around `current`.
pub fn propose<R: Rng + ?Sized>(
    current: &[f64],
    sigmas: &[f64],
    space: &ParameterSpace,
    mode: ProposalMode,
    rng: &mut R,
) -> Result<Vec<f64>> {
    propose_with(current, sigmas, space, mode, || rng.sample(StandardNormal))
}

/// [`propose`] with the standard normal draws supplied by `normal`.
pub(crate) fn propose_with(
    current: &[f64],
    sigmas: &[f64],
    space: &ParameterSpace,
    mode: ProposalMode,
    mut normal: impl FnMut() -> f64,
) -> Result<Vec<f64>> {
    if current.len() != space.len() || sigmas.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: current.len().min(sigmas.len()),
        });
    }
    let mut trial = current.to_vec();
    for (i, kind) in space.dims().iter().enumerate() {
        match (mode, *kind) {
            (ProposalMode::Geometric, DimensionKind::SphereAzimuth { partner }) => {
                let (phi, theta) =
                    sphere_step(current[i], current[partner], sigmas[i], &mut normal)?;
                trial[i] = phi;
                trial[partner] = theta;
            }
            // moved together with its azimuth
            (ProposalMode::Geometric, DimensionKind::SphereZenith { .. }) => {}
            (ProposalMode::Geometric, DimensionKind::Circular { lo, hi }) => {
                trial[i] = wrap(current[i] + sigmas[i] * normal(), lo, hi)?;
            }
            _ => trial[i] = current[i] + sigmas[i] * normal(),
        }
    }
    Ok(trial)
}

fn sphere_step(
    phi: f64,
    theta: f64,
    sigma: f64,
    normal: &mut impl FnMut() -> f64,
) -> Result<(f64, f64)> {
    let centre = sph_to_cart(phi, theta).to_array();
    for _ in 0..MAX_SPHERE_RETRIES {
        let moved = [
            centre[0] + sigma * normal(),
            centre[1] + sigma * normal(),
            centre[2] + sigma * normal(),
        ];
        match cart_to_sph(moved) {
            Ok(angles) => return Ok(angles),
            Err(Error::DegeneratePoint) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ProposalRetriesExhausted {
        retries: MAX_SPHERE_RETRIES,
    })
}

/// `ln α` from precomputed log prior densities: `-∞` unless
/// `loglike_t > threshold` (ties reject), else `min(ln π_t − ln π_l, 0)`.
pub fn accept_log_ratio(log_prior_t: f64, log_prior_l: f64, loglike_t: f64, threshold: f64) -> f64 {
    if !(loglike_t > threshold) || log_prior_t == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    (log_prior_t - log_prior_l).min(0.0)
}

/// `ln α` with the prior ratio taken in coordinate measure.
pub fn constrained_accept_log_ratio(
    theta_t: &[f64],
    theta_l: &[f64],
    loglike_t: f64,
    loglike_threshold: f64,
    prior: &[Prior],
) -> f64 {
    let log_prior = |theta: &[f64]| -> f64 {
        prior
            .iter()
            .zip(theta)
            .map(|(p, &x)| p.log_density(x))
            .sum()
    };
    accept_log_ratio(
        log_prior(theta_t),
        log_prior(theta_l),
        loglike_t,
        loglike_threshold,
    )
}

/// Prior log density with respect to the measure the proposal is symmetric
/// in: coordinate measure, except for sphere pairs in geometric mode where
/// the zenith factor is taken per unit solid angle (`π(θ)/sin θ`).
pub fn log_prior_for_mode(model: &Model, mode: ProposalMode, theta: &[f64]) -> f64 {
    if mode == ProposalMode::Vanilla {
        return model.log_prior(theta);
    }
    model
        .space()
        .dims()
        .iter()
        .zip(model.prior())
        .zip(theta)
        .map(|((kind, p), &x)| match (kind, p) {
            (DimensionKind::SphereZenith { .. }, Prior::Sinusoidal { lo, hi }) => {
                if *lo <= x && x <= *hi {
                    // π/(2w) sin θ / sin θ on [0, π]
                    libm::log(crate::math::PI / (2.0 * (hi - lo)))
                } else {
                    f64::NEG_INFINITY
                }
            }
            (DimensionKind::SphereZenith { .. }, _) => p.log_density(x) - libm::log(libm::sin(x)),
            _ => p.log_density(x),
        })
        .sum()
}

/// Trial-width update between chains: `σ·e^{1/N_a}` if `N_a > N_r`, else
/// `σ·e^{−1/N_r}`.
pub fn adapt_trial_scale(scale: f64, n_accepted: usize, n_rejected: usize) -> f64 {
    if n_accepted > n_rejected {
        scale * libm::exp(1.0 / n_accepted as f64)
    } else if n_rejected > 0 {
        scale * libm::exp(-1.0 / n_rejected as f64)
    } else {
        scale
    }
}

/// Current position of a constrained chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub theta: Vec<f64>,
    pub loglike: f64,
    /// [`log_prior_for_mode`] at `theta`.
    pub log_prior: f64,
}

impl ChainState {
    pub fn new(model: &Model, mode: ProposalMode, theta: Vec<f64>, loglike: f64) -> Self {
        let log_prior = log_prior_for_mode(model, mode, &theta);
        Self {
            theta,
            loglike,
            log_prior,
        }
    }
}

/// One Metropolis transition under a likelihood floor.
#[derive(Debug, Clone, Copy)]
pub struct ConstrainedWalker<'a> {
    pub model: &'a Model,
    pub mode: ProposalMode,
    pub sigmas: &'a [f64],
    pub threshold: f64,
}

impl ConstrainedWalker<'_> {
    /// Proposes, evaluates and accepts or rejects; returns whether the state
    /// moved.
    pub fn step<R: Rng + ?Sized>(&self, state: &mut ChainState, rng: &mut R) -> Result<bool> {
        let trial = propose(
            &state.theta,
            self.sigmas,
            self.model.space(),
            self.mode,
            rng,
        )?;
        let log_prior = log_prior_for_mode(self.model, self.mode, &trial);
        if log_prior == f64::NEG_INFINITY {
            return Ok(false);
        }
        let loglike = self.model.log_likelihood(&trial);
        if !loglike.is_finite() {
            return Err(Error::NonFiniteLikelihood {
                theta: trial,
                value: loglike,
            });
        }
        let log_alpha = accept_log_ratio(log_prior, state.log_prior, loglike, self.threshold);
        let accept = log_alpha == 0.0
            || (log_alpha > f64::NEG_INFINITY && libm::log(rng.random::<f64>()) < log_alpha);
        if accept {
            *state = ChainState {
                theta: trial,
                loglike,
                log_prior,
            };
        }
        Ok(accept)
    }
}

/// Chain driver. Carries the adaptive trial-width multiplier used in vanilla
/// mode; clone one per thread to run chains concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedSampler {
    cfg: ProposalConfig,
    vanilla_scale: f64,
}

impl ConstrainedSampler {
    pub fn new(cfg: ProposalConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            vanilla_scale: 1.0,
        })
    }

    pub fn config(&self) -> &ProposalConfig {
        &self.cfg
    }

    /// Multiplier on the vanilla-mode trial widths; stays 1 in geometric mode.
    pub fn vanilla_scale(&self) -> f64 {
        self.vanilla_scale
    }

    fn adapts(&self) -> bool {
        self.cfg.mode == ProposalMode::Vanilla && self.cfg.adapt_vanilla_sigma
    }

    /// Runs `nt_multiplier × N` trial steps from a random livepoint above
    /// `threshold` and returns the last accepted state. A chain with no
    /// acceptance is discarded and restarted from another random livepoint.
    /// The livepoint set is not modified.
    pub fn evolve_chain<R: Rng + ?Sized>(
        &mut self,
        live: &LivePointSet,
        threshold: f64,
        model: &Model,
        rng: &mut R,
    ) -> Result<ChainOutcome> {
        let n_trials = self.cfg.nt_multiplier * model.dim();
        let mut sigmas = trial_sigma_per_dim(live, model.space(), &self.cfg)?;
        let starts: Vec<usize> = (0..live.len())
            .filter(|&i| live.loglikes()[i] > threshold)
            .collect();
        if starts.is_empty() {
            return Err(Error::SamplerStall {
                attempts: 0,
                trials_per_chain: n_trials,
                threshold,
            });
        }
        for attempt in 0..=self.cfg.max_restarts {
            if self.cfg.mode == ProposalMode::Vanilla {
                let base = trial_sigma_per_dim(live, model.space(), &self.cfg)?;
                sigmas
                    .iter_mut()
                    .zip(base)
                    .for_each(|(s, b)| *s = b * self.vanilla_scale);
            }
            let walker = ConstrainedWalker {
                model,
                mode: self.cfg.mode,
                sigmas: &sigmas,
                threshold,
            };
            let start = starts[rng.random_range(0..starts.len())];
            let mut state = ChainState::new(
                model,
                self.cfg.mode,
                live.points()[start].clone(),
                live.loglikes()[start],
            );
            let mut n_accepted = 0;
            for _ in 0..n_trials {
                if walker.step(&mut state, rng)? {
                    n_accepted += 1;
                }
            }
            let n_rejected = n_trials - n_accepted;
            if self.adapts() {
                self.vanilla_scale = adapt_trial_scale(self.vanilla_scale, n_accepted, n_rejected);
            }
            if n_accepted > 0 {
                return Ok(ChainOutcome {
                    new_point: state.theta,
                    new_loglike: state.loglike,
                    n_accepted,
                    n_rejected,
                    restarts: attempt,
                });
            }
        }
        Err(Error::SamplerStall {
            attempts: self.cfg.max_restarts + 1,
            trials_per_chain: n_trials,
            threshold,
        })
    }
}
