fn main() {
    std::process::exit(spectral_lab::run_from(std::env::args_os()));
}
