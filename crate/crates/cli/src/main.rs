use clap::Parser;
use relaysim_cli::{run, Args};

fn main() {
    let args = Args::parse();
    if let Err(err) = run(&args) {
        eprintln!("relaysim: error: {err}");
        std::process::exit(err.exit_code());
    }
}
