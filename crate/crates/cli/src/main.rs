fn main() {
    std::process::exit(cusp_cli::main_with_args(std::env::args_os()));
}
