use std::process::ExitCode;

use clap::Parser;
use hcn_cli::{load_config, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli).and_then(|config| run(&cli, &config));
    match result {
        Ok(out) => {
            print!("{}", out.render(cli.output));
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("hcn: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
