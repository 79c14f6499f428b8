fn main() {
    std::process::exit(orbitope_lab::cli::main_with_args(std::env::args_os()));
}
