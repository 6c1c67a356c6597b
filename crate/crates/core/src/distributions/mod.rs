//! Priors, toy-model likelihoods, the special functions behind them, and a
//! grid-quadrature evidence oracle. Densities are exposed in log space only.

mod grid;
pub mod kent;
mod model;
mod prior;
pub mod registry;
pub mod special;
pub mod von_mises;

pub use grid::grid_log_evidence;
pub use kent::{flower_components, kent_log_norm, log_flower, log_kent, KentParams};
pub use model::{LogLikelihood, Model, ParamName};
pub use prior::{log_prior_density, Prior};
pub use registry::{model_from_key, ModelKey};
pub use von_mises::{log_torus, log_von_mises, VonMisesParams};
