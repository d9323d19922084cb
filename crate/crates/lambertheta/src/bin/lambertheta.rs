fn main() {
    std::process::exit(lambertheta::cli::main_from_args(std::env::args()));
}
