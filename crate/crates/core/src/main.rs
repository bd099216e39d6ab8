fn main() {
    std::process::exit(bcfb::cli::run(std::env::args_os()));
}
