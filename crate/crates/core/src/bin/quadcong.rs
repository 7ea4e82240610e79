fn main() {
    std::process::exit(quadcong::cli::main_with_args(std::env::args_os()));
}
