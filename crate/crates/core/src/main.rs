use clap::Parser;

use stfluct::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
