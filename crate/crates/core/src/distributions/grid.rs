use alloc::vec;
use alloc::vec::Vec;

use crate::math::LogSumExp;
use crate::{Error, Result};

use super::model::Model;

/// `ln ∫ L π dθ` by the midpoint rule on a regular grid over the prior
/// support. Independent of the sampler; used as the evidence oracle.
///
/// `points_per_dim` is either a single count applied to every dimension or
/// one count per dimension. Refuses more than three dimensions.
pub fn grid_log_evidence(model: &Model, points_per_dim: &[usize]) -> Result<f64> {
    let n = model.dim();
    if n > 3 {
        return Err(Error::GridTooLarge { dims: n });
    }
    let counts: Vec<usize> = match points_per_dim {
        [c] => vec![*c; n],
        cs if cs.len() == n => cs.to_vec(),
        cs => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cs.len(),
            })
        }
    };
    if counts.contains(&0) {
        return Err(Error::InvalidConfig("grid resolution must be positive"));
    }
    let bounds: Vec<(f64, f64)> = model.prior().iter().map(|p| p.bounds()).collect();
    let steps: Vec<f64> = bounds
        .iter()
        .zip(&counts)
        .map(|(&(lo, hi), &c)| (hi - lo) / c as f64)
        .collect();
    let log_cell: f64 = steps.iter().map(|h| libm::log(*h)).sum();

    let mut index = vec![0usize; n];
    let mut theta = vec![0.0; n];
    let mut acc = LogSumExp::default();
    loop {
        for d in 0..n {
            theta[d] = bounds[d].0 + (index[d] as f64 + 0.5) * steps[d];
        }
        let lp = model.log_prior(&theta);
        if lp > f64::NEG_INFINITY {
            acc.add(model.log_likelihood(&theta) + lp + log_cell);
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == n {
                return Ok(acc.value());
            }
            index[d] += 1;
            if index[d] < counts[d] {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}
