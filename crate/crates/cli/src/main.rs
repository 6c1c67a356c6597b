use std::process::ExitCode;

use geonest_cli::{output::sig6, parse_args, run_and_write};

fn main() -> ExitCode {
    let cfg = match parse_args(std::env::args_os()) {
        Ok(cfg) => cfg,
        Err(e) => e.exit(),
    };
    match run_and_write(&cfg) {
        Ok((result, paths)) => {
            println!(
                "{}: ln Z = {} +/- {} after {} iterations",
                cfg.model_key,
                sig6(result.logz_mean),
                sig6(result.logz_err),
                result.n_iterations
            );
            println!("chain written to {}", paths.chain.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
