use std::process::ExitCode;

use chaoticlms::experiment::{cli, seed_from_env, ExitStatus};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let status = match seed_from_env() {
        Ok(seed) => cli::run(std::env::args_os(), seed, &mut std::io::stdout()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitStatus::Usage
        }
    };
    ExitCode::from(status.code() as u8)
}
