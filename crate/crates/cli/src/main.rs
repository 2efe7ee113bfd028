fn main() {
    std::process::exit(sinratio_cli::run(std::env::args()));
}
