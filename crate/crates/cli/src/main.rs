use std::io;
use std::process::ExitCode;

use oaa_cli::{configure_threads, run, THREADS_ENV};

fn main() -> ExitCode {
    let threads = std::env::var(THREADS_ENV).ok();
    if let Err(f) = configure_threads(threads.as_deref()) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code as u8);
    }
    let code = run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
