fn main() {
    std::process::exit(bjbi::cli::main_with_args(std::env::args_os()));
}
