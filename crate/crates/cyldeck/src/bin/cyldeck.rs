fn main() {
    std::process::exit(cyldeck::cli::run_main());
}
