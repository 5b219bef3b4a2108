fn main() {
    std::process::exit(harmonic_chain::cli::run());
}
