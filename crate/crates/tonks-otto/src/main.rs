use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = tonks_otto::Cli::parse();
    match tonks_otto::run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
