fn main() {
    std::process::exit(omega_sim::cli::run(std::env::args_os()));
}
