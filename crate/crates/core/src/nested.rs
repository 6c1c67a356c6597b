//! The nested sampling loop and evidence bookkeeping.
//!
//! Prior volume shrinks deterministically as `X_i = exp(−i/n_l)`; the
//! evidence is accumulated by rectangle quadrature. Alongside it, the first
//! and second moments of the evidence under the stochastic shrinkage model
//! `t ~ Beta(n_l, 1)` are tracked in log space, and the reported `ln Z` and
//! its error come from fitting a log-normal to those moments.

use alloc::vec::Vec;

use rand::Rng;

use crate::distributions::Model;
use crate::geometry::DimensionKind;
use crate::math::{log_add_exp, log_sum_exp, LogSumExp};
use crate::sampler::{ConstrainedSampler, ProposalConfig};
use crate::{Error, Result};

/// The current livepoints and their log-likelihoods.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LivePointSet {
    points: Vec<Vec<f64>>,
    loglikes: Vec<f64>,
}

impl LivePointSet {
    pub fn new(points: Vec<Vec<f64>>, loglikes: Vec<f64>) -> Result<Self> {
        if points.len() != loglikes.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: loglikes.len(),
            });
        }
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|p| p.len() != first.len()) {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    got: bad.len(),
                });
            }
        }
        Ok(Self { points, loglikes })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn loglikes(&self) -> &[f64] {
        &self.loglikes
    }

    /// Index of the lowest log-likelihood; ties go to the lowest index.
    pub fn worst_index(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &l) in self.loglikes.iter().enumerate() {
            if best.is_none_or(|b| l < self.loglikes[b]) {
                best = Some(i);
            }
        }
        best
    }

    pub fn replace(&mut self, index: usize, point: Vec<f64>, loglike: f64) {
        self.points[index] = point;
        self.loglikes[index] = loglike;
    }

    /// `ln mean(L)` over the livepoints.
    pub fn log_mean_likelihood(&self) -> f64 {
        log_sum_exp(&self.loglikes) - libm::log(self.len() as f64)
    }

    fn is_plateau(&self) -> bool {
        self.loglikes.windows(2).all(|w| w[0] == w[1])
    }

    fn into_parts(self) -> (Vec<Vec<f64>>, Vec<f64>) {
        (self.points, self.loglikes)
    }
}

/// A discarded point with its quadrature weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DeadPoint {
    pub theta: Vec<f64>,
    pub loglike: f64,
    /// 1-based order of removal. Final livepoints continue the count in
    /// ascending likelihood order.
    pub iteration: usize,
    /// `ln ΔX` assigned to this point.
    pub log_volume: f64,
    /// `ln(L ΔX / Z)`.
    pub log_weight: f64,
}

/// Log-space moments `E[Z]`, `E[Z²]`, `E[X]`, `E[X²]` and `E[ZX]` under
/// `Beta(n, 1)` shrinkage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceAccumulator {
    n_live: usize,
    log_z: f64,
    log_z2: f64,
    log_x: f64,
    log_x2: f64,
    log_zx: f64,
}

impl EvidenceAccumulator {
    pub fn new(n_live: usize) -> Self {
        Self {
            n_live,
            log_z: f64::NEG_INFINITY,
            log_z2: f64::NEG_INFINITY,
            log_x: 0.0,
            log_x2: 0.0,
            log_zx: f64::NEG_INFINITY,
        }
    }

    /// Removes a point with log-likelihood `loglike`.
    pub fn push(&mut self, loglike: f64) {
        let n = self.n_live as f64;
        let ln_t1 = libm::log(n / (n + 1.0));
        let ln_t2 = libm::log(n / (n + 2.0));
        // E[1 − t], E[t − t²] and E[(1 − t)²]
        let ln_1mt = -libm::log(n + 1.0);
        let ln_t1mt2 = libm::log(n / ((n + 1.0) * (n + 2.0)));
        let ln_1mt_sq = libm::log(2.0 / ((n + 1.0) * (n + 2.0)));
        let l = loglike;

        let log_z2 = log_sum_exp(&[
            self.log_z2,
            core::f64::consts::LN_2 + l + self.log_zx + ln_1mt,
            2.0 * l + self.log_x2 + ln_1mt_sq,
        ]);
        let log_zx = log_add_exp(ln_t1 + self.log_zx, l + self.log_x2 + ln_t1mt2);
        let log_z = log_add_exp(self.log_z, l + self.log_x + ln_1mt);
        self.log_z2 = log_z2;
        self.log_zx = log_zx;
        self.log_z = log_z;
        self.log_x += ln_t1;
        self.log_x2 += ln_t2;
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn log_z2(&self) -> f64 {
        self.log_z2
    }

    pub fn log_x(&self) -> f64 {
        self.log_x
    }

    /// `(ln E[Z], ln E[Z²])` after adding the remaining volume at mean
    /// livepoint likelihood `exp(log_mean_live)`.
    pub fn finalize(&self, log_mean_live: f64) -> (f64, f64) {
        let l = log_mean_live;
        let m1 = log_add_exp(self.log_z, l + self.log_x);
        let m2 = log_sum_exp(&[
            self.log_z2,
            core::f64::consts::LN_2 + l + self.log_zx,
            2.0 * l + self.log_x2,
        ]);
        (m1, m2)
    }
}

/// Log-normal summary of a positive quantity given its first two moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalSummary {
    pub mean: f64,
    pub var: f64,
    /// The raw variance came out negative (`m2 < m1²` through rounding) and
    /// was set to 0.
    pub clamped: bool,
}

impl LogNormalSummary {
    pub fn std_dev(&self) -> f64 {
        libm::sqrt(self.var)
    }
}

/// Mean and variance of `ln Z` from `m1 = E[Z]`, `m2 = E[Z²]`:
/// `2 ln m1 − ½ ln m2` and `ln m2 − 2 ln m1`.
pub fn lognormal_report(m1: f64, m2: f64) -> Result<LogNormalSummary> {
    if !(m1 > 0.0) {
        return Err(Error::Domain {
            what: "first moment",
            value: m1,
        });
    }
    if !(m2 > 0.0) {
        return Err(Error::Domain {
            what: "second moment",
            value: m2,
        });
    }
    lognormal_report_log(libm::log(m1), libm::log(m2))
}

/// [`lognormal_report`] with the moments given as logarithms.
pub fn lognormal_report_log(log_m1: f64, log_m2: f64) -> Result<LogNormalSummary> {
    if !log_m1.is_finite() {
        return Err(Error::Domain {
            what: "log first moment",
            value: log_m1,
        });
    }
    if !log_m2.is_finite() {
        return Err(Error::Domain {
            what: "log second moment",
            value: log_m2,
        });
    }
    let raw = log_m2 - 2.0 * log_m1;
    Ok(LogNormalSummary {
        mean: 2.0 * log_m1 - 0.5 * log_m2,
        var: raw.max(0.0),
        clamped: raw < 0.0,
    })
}

/// `ln(L_i ΔX_i / Z)` for every point, dead points first.
pub fn posterior_log_weights(dead: &[DeadPoint], final_live: &[DeadPoint], log_z: f64) -> Vec<f64> {
    dead.iter()
        .chain(final_live)
        .map(|p| p.loglike + p.log_volume - log_z)
        .collect()
}

/// Normalized posterior weights `L_i ΔX_i / Z`, dead points first.
pub fn posterior_weights(dead: &[DeadPoint], final_live: &[DeadPoint], log_z: f64) -> Vec<f64> {
    posterior_log_weights(dead, final_live, log_z)
        .into_iter()
        .map(libm::exp)
        .collect()
}

/// Draws `n_live` independent points from the prior by inverse CDF.
pub fn init_livepoints<R: Rng + ?Sized>(
    model: &Model,
    n_live: usize,
    rng: &mut R,
) -> Result<LivePointSet> {
    if n_live < 2 {
        return Err(Error::TooFewLivePoints { n: n_live });
    }
    let mut points = Vec::with_capacity(n_live);
    let mut loglikes = Vec::with_capacity(n_live);
    for _ in 0..n_live {
        let theta: Vec<f64> = model
            .space()
            .dims()
            .iter()
            .zip(model.prior())
            .map(|(kind, p)| {
                let x = p.inverse_cdf(rng.random::<f64>());
                let (lo, hi) = kind.bounds();
                let half_open = matches!(
                    kind,
                    DimensionKind::Circular { .. } | DimensionKind::SphereAzimuth { .. }
                );
                if half_open && x >= hi {
                    lo
                } else {
                    x
                }
            })
            .collect();
        let l = model.log_likelihood(&theta);
        if !l.is_finite() {
            return Err(Error::NonFiniteLikelihood { theta, value: l });
        }
        points.push(theta);
        loglikes.push(l);
    }
    LivePointSet::new(points, loglikes)
}

/// Output of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct NsResult {
    /// Log-normal mean of `ln Z` from the evidence moments.
    pub logz_mean: f64,
    /// Log-normal standard deviation of `ln Z`.
    pub logz_err: f64,
    pub logz_var_clamped: bool,
    /// `ln Z` from the deterministic quadrature; the posterior weights are
    /// normalized by this value.
    pub logz_quadrature: f64,
    pub dead_points: Vec<DeadPoint>,
    /// The livepoints at termination, ascending in likelihood, each carrying
    /// an equal share of the remaining volume.
    pub final_livepoints: Vec<DeadPoint>,
    pub n_iterations: usize,
    pub n_live: usize,
    /// Acceptance fraction of each successful chain.
    pub acceptance_trace: Vec<f64>,
    /// Zero-acceptance chains discarded over the whole run.
    pub n_restarts: usize,
}

impl NsResult {
    /// Dead points followed by the final livepoints.
    pub fn samples(&self) -> impl Iterator<Item = &DeadPoint> {
        self.dead_points.iter().chain(&self.final_livepoints)
    }

    pub fn weights(&self) -> Vec<f64> {
        self.samples().map(|p| libm::exp(p.log_weight)).collect()
    }

    pub fn mean_acceptance(&self) -> f64 {
        if self.acceptance_trace.is_empty() {
            return f64::NAN;
        }
        self.acceptance_trace.iter().sum::<f64>() / self.acceptance_trace.len() as f64
    }
}

/// Runs nested sampling to completion.
///
/// Each iteration removes the lowest-likelihood livepoint and replaces it by
/// a constrained chain. The loop stops once the remaining volume at mean
/// livepoint likelihood accounts for less than `epsilon` of the total
/// evidence, or when every livepoint has the same likelihood, in which case
/// no replacement can exist.
pub fn run<R: Rng + ?Sized>(
    model: &Model,
    n_live: usize,
    cfg: &ProposalConfig,
    epsilon: f64,
    rng: &mut R,
) -> Result<NsResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidConfig("epsilon must lie in (0, 1)"));
    }
    let mut sampler = ConstrainedSampler::new(*cfg)?;
    let mut live = init_livepoints(model, n_live, rng)?;
    let mut moments = EvidenceAccumulator::new(n_live);
    let mut quadrature = LogSumExp::default();
    let ln_eps = libm::log(epsilon);
    // ln(1 − e^{−1/n}): every shell has ΔX_i = X_{i−1}(1 − e^{−1/n})
    let ln_shell = libm::log(-libm::expm1(-1.0 / n_live as f64));
    let mut log_x = 0.0;
    let mut dead = Vec::new();
    let mut trace = Vec::new();
    let mut n_restarts = 0;

    while !live.is_plateau() {
        let iteration = dead.len() + 1;
        let worst = live.worst_index().expect("livepoints are non-empty");
        let threshold = live.loglikes()[worst];
        let log_volume = log_x + ln_shell;
        quadrature.add(threshold + log_volume);
        moments.push(threshold);
        dead.push(DeadPoint {
            theta: live.points()[worst].clone(),
            loglike: threshold,
            iteration,
            log_volume,
            log_weight: f64::NAN,
        });
        log_x = -(iteration as f64) / n_live as f64;

        let outcome = sampler.evolve_chain(&live, threshold, model, rng)?;
        trace.push(outcome.acceptance_rate());
        n_restarts += outcome.restarts;
        live.replace(worst, outcome.new_point, outcome.new_loglike);

        let log_zf = log_x + live.log_mean_likelihood();
        if log_zf - log_add_exp(log_zf, quadrature.value()) < ln_eps {
            break;
        }
    }

    let n_iterations = dead.len();
    let log_mean_live = live.log_mean_likelihood();
    let (log_m1, log_m2) = moments.finalize(log_mean_live);
    let report = lognormal_report_log(log_m1, log_m2)?;
    let logz_quadrature = log_add_exp(quadrature.value(), log_x + log_mean_live);

    let (points, loglikes) = live.into_parts();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| loglikes[a].total_cmp(&loglikes[b]).then(a.cmp(&b)));
    let share = log_x - libm::log(n_live as f64);
    let mut final_livepoints: Vec<DeadPoint> = order
        .iter()
        .enumerate()
        .map(|(k, &i)| DeadPoint {
            theta: points[i].clone(),
            loglike: loglikes[i],
            iteration: n_iterations + 1 + k,
            log_volume: share,
            log_weight: f64::NAN,
        })
        .collect();

    let log_w = posterior_log_weights(&dead, &final_livepoints, logz_quadrature);
    for (p, w) in dead
        .iter_mut()
        .chain(final_livepoints.iter_mut())
        .zip(log_w)
    {
        p.log_weight = w;
    }

    Ok(NsResult {
        logz_mean: report.mean,
        logz_err: report.std_dev(),
        logz_var_clamped: report.clamped,
        logz_quadrature,
        dead_points: dead,
        final_livepoints,
        n_iterations,
        n_live,
        acceptance_trace: trace,
        n_restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Prior;
    use crate::geometry::ParameterSpace;
    use crate::math::TAU;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lognormal_examples() {
        let r = lognormal_report(core::f64::consts::E, core::f64::consts::E.powi(2)).unwrap();
        assert!((r.mean - 1.0).abs() < 1e-15 && r.var.abs() < 1e-15);
        let r = lognormal_report(1.0, core::f64::consts::E).unwrap();
        assert!((r.mean + 0.5).abs() < 1e-15 && (r.var - 1.0).abs() < 1e-15);
        let r = lognormal_report_log(0.0, -1e-12).unwrap();
        assert!(r.clamped && r.var == 0.0);
        assert!(lognormal_report(0.0, 1.0).is_err());
        assert!(lognormal_report_log(f64::NEG_INFINITY, 0.0).is_err());
    }

    #[test]
    fn moments_match_monte_carlo() {
        // Z = Σ L_i X_{i−1}(1 − t_i) + L̄ X_k with t_i ~ Beta(n, 1) = U^{1/n}
        let n = 5;
        let ls = [-3.0, -2.0, -1.5, -1.0, -0.2, 0.0];
        let lbar = 0.3f64;
        let mut acc = EvidenceAccumulator::new(n);
        ls.iter().for_each(|&l| acc.push(l));
        let (m1, m2) = acc.finalize(lbar);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 400_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..draws {
            let (mut x, mut z) = (1.0, 0.0);
            for &l in &ls {
                let t = rng.random::<f64>().powf(1.0 / n as f64);
                z += libm::exp(l) * x * (1.0 - t);
                x *= t;
            }
            z += libm::exp(lbar) * x;
            s1 += z;
            s2 += z * z;
        }
        let (e1, e2) = (s1 / draws as f64, s2 / draws as f64);
        assert!((m1.exp() / e1 - 1.0).abs() < 3e-3, "{} {}", m1.exp(), e1);
        assert!((m2.exp() / e2 - 1.0).abs() < 6e-3, "{} {}", m2.exp(), e2);
    }

    #[test]
    fn worst_index_ties() {
        let live = LivePointSet::new(vec![vec![0.0]; 4], vec![1.0, -2.0, 0.0, -2.0]).unwrap();
        assert_eq!(live.worst_index(), Some(1));
        assert_eq!(LivePointSet::default().worst_index(), None);
        assert!(LivePointSet::new(vec![vec![0.0]], vec![]).is_err());
    }

    #[test]
    fn constant_likelihood() {
        let space = ParameterSpace::circular(2, 0.0, TAU).unwrap();
        let prior = vec![Prior::uniform(0.0, TAU).unwrap(); 2];
        let model = Model::new(space, prior, |_: &[f64]| -1.25).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = run(&model, 50, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
        assert_eq!(r.n_iterations, 0);
        assert!((r.logz_mean + 1.25).abs() < 1e-12);
        assert!(r.logz_err < 1e-6);
        let total: f64 = r.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn init_rejects_small_sets() {
        let model = crate::distributions::registry::circle_model();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            init_livepoints(&model, 1, &mut rng),
            Err(Error::TooFewLivePoints { n: 1 })
        ));
        assert_eq!(init_livepoints(&model, 2, &mut rng).unwrap().len(), 2);
        let r = run(&model, 10, &ProposalConfig::default(), 1.0, &mut rng);
        assert!(matches!(r, Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn circle_run_bookkeeping() {
        let model = crate::distributions::registry::circle_model();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = run(&model, 100, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
        assert_eq!(r.dead_points.len(), r.n_iterations);
        assert_eq!(r.final_livepoints.len(), 100);
        assert_eq!(r.acceptance_trace.len(), r.n_iterations);
        for w in r.dead_points.windows(2) {
            assert!(w[1].loglike >= w[0].loglike);
            assert!(w[1].log_volume < w[0].log_volume);
        }
        let all: Vec<_> = r.samples().collect();
        for w in all.windows(2) {
            assert!(w[1].loglike >= w[0].loglike);
            assert_eq!(w[1].iteration, w[0].iteration + 1);
        }
        let total: f64 = r.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!((r.logz_mean - r.logz_quadrature).abs() < 3.0 * r.logz_err + 1e-3);
    }
}
