//! Chain and summary files.
//!
//! The chain file follows the getdist plain-text convention: one row per
//! sample, `weight  -2lnL  params...`. Rows are in removal order, so the
//! likelihood column is non-increasing in `-2lnL`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use geonest::distributions::Model;
use geonest::nested::NsResult;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const RNG_DESCRIPTION: &str = "ChaCha20 stream 0";

/// Summary written to `<root>.stats` and `<root>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub model: String,
    pub mode: String,
    pub n_live: usize,
    pub epsilon: f64,
    pub nt_multiplier: u32,
    pub seed: u64,
    pub rng: String,
    pub logz_mean: f64,
    pub logz_err: f64,
    pub logz_var_clamped: bool,
    pub logz_quadrature: f64,
    pub n_iterations: usize,
    /// Mean over iterations of the chain acceptance fraction; absent when
    /// the run ended before the first iteration.
    pub mean_acceptance: Option<f64>,
    pub acceptance_trace: Vec<f64>,
    /// Zero-acceptance chains discarded and restarted.
    pub n_restarts: usize,
}

impl RunStats {
    pub fn new(result: &NsResult, cfg: &RunConfig) -> Self {
        let mean = result.mean_acceptance();
        Self {
            model: cfg.model_key.to_string(),
            mode: cfg.sampler_mode.to_string(),
            n_live: result.n_live,
            epsilon: cfg.epsilon,
            nt_multiplier: cfg.nt_multiplier,
            seed: cfg.seed,
            rng: RNG_DESCRIPTION.to_string(),
            logz_mean: result.logz_mean,
            logz_err: result.logz_err,
            logz_var_clamped: result.logz_var_clamped,
            logz_quadrature: result.logz_quadrature,
            n_iterations: result.n_iterations,
            mean_acceptance: mean.is_finite().then_some(mean),
            acceptance_trace: result.acceptance_trace.clone(),
            n_restarts: result.n_restarts,
        }
    }
}

/// Paths of the four output files for `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub chain: PathBuf,
    pub paramnames: PathBuf,
    pub stats: PathBuf,
    pub json: PathBuf,
}

impl OutputPaths {
    pub fn new(root: &Path) -> Self {
        let with = |ext: &str| {
            let mut s = root.as_os_str().to_owned();
            s.push(".");
            s.push(ext);
            PathBuf::from(s)
        };
        Self {
            chain: with("txt"),
            paramnames: with("paramnames"),
            stats: with("stats"),
            json: with("json"),
        }
    }
}

pub fn write_outputs(result: &NsResult, model: &Model, cfg: &RunConfig) -> io::Result<OutputPaths> {
    let paths = OutputPaths::new(&cfg.output_root);
    let stats = RunStats::new(result, cfg);

    let mut w = BufWriter::new(File::create(&paths.chain)?);
    write_chain(&mut w, result)?;
    w.into_inner()?.sync_all()?;

    let mut w = BufWriter::new(File::create(&paths.paramnames)?);
    for p in model.names() {
        writeln!(w, "{} {}", p.name, p.label)?;
    }
    w.flush()?;

    let mut w = BufWriter::new(File::create(&paths.stats)?);
    write_stats(&mut w, &stats)?;
    w.flush()?;

    let mut w = BufWriter::new(File::create(&paths.json)?);
    serde_json::to_writer_pretty(&mut w, &stats)?;
    writeln!(w)?;
    w.flush()?;

    Ok(paths)
}

pub fn write_chain(w: &mut impl Write, result: &NsResult) -> io::Result<()> {
    for p in result.samples() {
        write!(w, "{:.16e}  {:.16e}", p.log_weight.exp(), -2.0 * p.loglike)?;
        for x in &p.theta {
            write!(w, "  {x:.16e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_stats(w: &mut impl Write, s: &RunStats) -> io::Result<()> {
    writeln!(w, "model            {}", s.model)?;
    writeln!(w, "mode             {}", s.mode)?;
    writeln!(w, "logz_mean        {}", sig6(s.logz_mean))?;
    writeln!(w, "logz_err         {}", sig6(s.logz_err))?;
    writeln!(w, "n_iterations     {}", s.n_iterations)?;
    writeln!(w, "n_live           {}", s.n_live)?;
    writeln!(w, "seed             {}", s.seed)?;
    match s.mean_acceptance {
        Some(a) => writeln!(w, "mean_acceptance  {}", sig6(a))?,
        None => writeln!(w, "mean_acceptance  n/a")?,
    }
    writeln!(w, "chain_restarts   {}", s.n_restarts)?;
    writeln!(w, "epsilon          {}", sig6(s.epsilon))?;
    writeln!(w, "nt_multiplier    {}", s.nt_multiplier)?;
    writeln!(w, "rng              {}", s.rng)
}

/// Six significant digits, fixed notation for moderate magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}
