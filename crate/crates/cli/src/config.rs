use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use geonest::distributions::ModelKey;
use geonest::sampler::{ProposalConfig, ProposalMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerMode {
    Vanilla,
    Geometric,
}

impl From<SamplerMode> for ProposalMode {
    fn from(m: SamplerMode) -> Self {
        match m {
            SamplerMode::Vanilla => ProposalMode::Vanilla,
            SamplerMode::Geometric => ProposalMode::Geometric,
        }
    }
}

impl fmt::Display for SamplerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerMode::Vanilla => "vanilla",
            SamplerMode::Geometric => "geometric",
        })
    }
}

/// Run nested sampling on a built-in model and write getdist-style chains.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "geonest", version, about)]
pub struct RunConfig {
    /// Model key: circle, torus<n> (n >= 2) or sphere<m> (m >= 1)
    #[arg(long = "model", value_name = "KEY", value_parser = parse_model)]
    pub model_key: ModelKey,

    /// Number of livepoints
    #[arg(long = "nlive", default_value_t = 500, value_parser = parse_nlive)]
    pub n_live: usize,

    /// Stop once the remaining evidence fraction drops below this
    #[arg(long, default_value_t = 0.01, value_parser = parse_epsilon)]
    pub epsilon: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long = "mode", value_enum, default_value_t = SamplerMode::Geometric)]
    pub sampler_mode: SamplerMode,

    /// Trial steps per chain, per dimension
    #[arg(long = "nt-mult", default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub nt_multiplier: u32,

    /// Output root; writes <root>.txt, .paramnames, .stats and .json
    #[arg(long = "out", value_name = "ROOT")]
    pub output_root: PathBuf,
}

impl RunConfig {
    pub fn proposal(&self) -> ProposalConfig {
        ProposalConfig {
            mode: self.sampler_mode.into(),
            nt_multiplier: self.nt_multiplier as usize,
            ..ProposalConfig::default()
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(argv)
}

fn parse_model(s: &str) -> Result<ModelKey, String> {
    s.parse().map_err(|e: geonest::Error| e.to_string())
}

fn parse_nlive(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err("at least 2 livepoints are required".into());
    }
    Ok(n)
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let e: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(e > 0.0 && e < 1.0) {
        return Err("must lie strictly between 0 and 1".into());
    }
    Ok(e)
}
