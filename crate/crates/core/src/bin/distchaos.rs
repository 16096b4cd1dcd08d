use clap::Parser;

fn main() {
    std::process::exit(distchaos::cli::run(distchaos::cli::Cli::parse()));
}
