fn main() {
    std::process::exit(lagrange_spectra::cli::run(std::env::args_os()));
}
