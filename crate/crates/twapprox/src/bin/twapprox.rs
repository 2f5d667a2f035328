fn main() {
    std::process::exit(twapprox::cli::run(std::env::args_os()));
}
