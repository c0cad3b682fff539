use std::process::ExitCode;

use commonbath::check::SEED_VAR;

fn main() -> ExitCode {
    let seed = std::env::var(SEED_VAR).ok();
    let code = commonbath::cli::run(
        std::env::args_os(),
        seed.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
