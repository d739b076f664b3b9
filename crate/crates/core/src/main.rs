fn main() {
    std::process::exit(grlwe::cli::main_from(std::env::args_os()));
}
