use clap::Parser;

fn main() {
    let cli = twistk3::cli::Cli::parse();
    std::process::exit(twistk3::cli::run(&cli));
}
