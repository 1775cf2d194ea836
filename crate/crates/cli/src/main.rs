fn main() {
    std::process::exit(spinbus_cli::main_with_args(std::env::args_os()));
}
