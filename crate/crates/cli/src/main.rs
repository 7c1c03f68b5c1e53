use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let threads = std::env::var(okounkov_cli::THREADS_ENV).ok();
    let code = okounkov_cli::run(std::env::args_os(), threads.as_deref(), &mut io::stdout().lock(), &mut io::stderr());
    ExitCode::from(code as u8)
}
