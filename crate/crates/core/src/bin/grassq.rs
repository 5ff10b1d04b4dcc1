fn main() {
    std::process::exit(grassq::cli::main_from(std::env::args_os()));
}
