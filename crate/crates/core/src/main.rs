fn main() {
    std::process::exit(monoidx::cli::run(std::env::args_os()));
}
