use clap::Parser;

fn main() {
    let cli = gammaops::cli::Cli::parse();
    std::process::exit(gammaops::cli::run(cli));
}
