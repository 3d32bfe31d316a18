fn main() {
    std::process::exit(dwell::cli::run(std::env::args_os()));
}
