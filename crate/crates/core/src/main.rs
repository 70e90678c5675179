use std::io::Write;

use clap::Parser;
use eaqecc::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(out.json.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.exit_code);
}
