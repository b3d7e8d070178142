fn main() {
    std::process::exit(cqca::cli::main_with_args(std::env::args_os()));
}
