use clap::Parser;

use gave::cli::{error_json, run_command, Cli};

fn main() {
    let cli = Cli::parse();
    match run_command(&cli) {
        Ok(report) => println!("{report}"),
        Err(err) => {
            println!("{}", error_json(&err));
            std::process::exit(1);
        }
    }
}
