fn main() {
    std::process::exit(qcharm::cli::main_with_args(std::env::args_os()));
}
