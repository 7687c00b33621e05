use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut out = std::io::stdout().lock();
    ExitCode::from(hyperprog_cli::run(std::env::args_os(), &mut out))
}
