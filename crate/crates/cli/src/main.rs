use clap::Parser;

use swanson_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("swanson: {e}");
        std::process::exit(e.exit_code());
    }
}
