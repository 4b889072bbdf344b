fn main() {
    std::process::exit(cpbs_core::cli::main_with_args(std::env::args_os()));
}
