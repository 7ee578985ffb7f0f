fn main() {
    std::process::exit(mlsim::cli::main_with_args(std::env::args_os()));
}
