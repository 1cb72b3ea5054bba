fn main() {
    std::process::exit(spectral_local::cli::main_with_args(std::env::args_os()));
}
