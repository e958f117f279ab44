fn main() {
    std::process::exit(cylcert::cli::main_with_args(std::env::args_os()));
}
