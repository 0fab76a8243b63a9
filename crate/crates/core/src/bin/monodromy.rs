fn main() {
    std::process::exit(monodromy::cli::main_with_args(std::env::args_os()));
}
