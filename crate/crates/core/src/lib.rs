//! Geometric nested sampling.
//!
//! Nested sampling with a likelihood-constrained Metropolis sampler whose
//! trial moves respect the geometry of the parameters: circular parameters
//! are stepped with a wrapped Gaussian, and (azimuth, zenith) pairs on a
//! sphere are stepped with an isotropic Gaussian in Cartesian space and
//! projected back onto the sphere.
//!
//! The crate is `no_std` (with `alloc`). The `std` feature, on by default,
//! only forwards to the dependencies.
//!
//! ```
//! use geonest::{distributions::registry, nested, sampler::ProposalConfig};
//! use rand::SeedableRng;
//!
//! let model = registry::circle_model();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let result = nested::run(&model, 100, &ProposalConfig::default(), 0.01, &mut rng).unwrap();
//! assert!((result.logz_mean + (2.0 * core::f64::consts::PI).ln()).abs() < 0.5);
//! ```
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod distributions;
mod error;
pub mod geometry;
pub mod math;
pub mod nested;
pub mod sampler;

pub use error::{Error, Result};
