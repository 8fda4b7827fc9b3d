use clap::Parser;

fn main() {
    let cli = entpower_cli::Cli::parse();
    if let Err(err) = entpower_cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
