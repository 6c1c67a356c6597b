//! Run orchestration for `geonest`: model lookup, seeding, execution and
//! getdist-style output.

pub mod config;
pub mod output;

use geonest::distributions::Model;
use geonest::nested::{self, NsResult};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use config::{parse_args, RunConfig, SamplerMode};
pub use output::{write_outputs, OutputPaths, RunStats};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Sampler(#[from] geonest::Error),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

/// The generator for `seed`. Every run draws from stream 0 of this key.
pub fn rng_for_seed(seed: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

pub fn build_model(cfg: &RunConfig) -> Model {
    cfg.model_key.build()
}

/// Runs the sampler for `cfg` without writing anything.
pub fn execute(cfg: &RunConfig, model: &Model) -> Result<NsResult, RunError> {
    let mut rng = rng_for_seed(cfg.seed);
    Ok(nested::run(
        model,
        cfg.n_live,
        &cfg.proposal(),
        cfg.epsilon,
        &mut rng,
    )?)
}

/// Runs and writes all output files.
pub fn run_and_write(cfg: &RunConfig) -> Result<(NsResult, OutputPaths), RunError> {
    let model = build_model(cfg);
    let result = execute(cfg, &model)?;
    let paths = write_outputs(&result, &model, cfg)?;
    Ok((result, paths))
}
