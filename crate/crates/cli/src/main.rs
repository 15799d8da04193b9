use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = fermat_pell_cli::run(std::env::args_os());
    print!("{}", outcome.payload);
    eprint!("{}", outcome.diagnostic);
    let _ = std::io::stdout().flush();
    ExitCode::from(outcome.exit_code as u8)
}
