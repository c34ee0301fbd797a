fn main() {
    std::process::exit(linbandit::cli::main_with_args(std::env::args_os()));
}
