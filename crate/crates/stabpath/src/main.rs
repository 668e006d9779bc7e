use clap::error::ErrorKind;
use clap::Parser;

use stabpath::cli::Cli;
use stabpath::failure::exit;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::SUCCESS,
                // usage errors are bad input, not a boundary case
                _ => exit::BAD_INPUT,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(stabpath::commands::run(&cli));
}
