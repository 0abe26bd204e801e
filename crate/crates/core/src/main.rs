fn main() {
    std::process::exit(rigorkit::cli::main_with_args(std::env::args_os()));
}
