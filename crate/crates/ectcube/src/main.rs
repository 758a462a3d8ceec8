use clap::Parser;

fn main() {
    let cli = ectcube::cli::Cli::parse();
    if let Err(e) = ectcube::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
