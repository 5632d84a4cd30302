fn main() {
    std::process::exit(ptilt_cli::main_with_args(std::env::args_os()));
}
