fn main() {
    std::process::exit(whitlocal::cli::main_with_args(std::env::args_os()));
}
