fn main() {
    std::process::exit(wordrank::cli::main_with_args(std::env::args_os()));
}
