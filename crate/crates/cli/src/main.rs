use std::process::ExitCode;

use ballean_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    print!("{}", result.render());
    for line in &result.diagnostics {
        eprintln!("{line}");
    }
    ExitCode::from(result.status.exit_code() as u8)
}
