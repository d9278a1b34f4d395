fn main() {
    std::process::exit(fluxladder::cli::run(std::env::args_os()));
}
