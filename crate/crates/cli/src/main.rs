use clap::Parser;

use flood_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = flood_cli::commands::run(&cli) {
        eprintln!("{}", e.render());
        std::process::exit(e.exit_code());
    }
}
