fn main() {
    std::process::exit(biharm_cli::main_with_args(std::env::args_os()));
}
