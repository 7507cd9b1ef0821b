fn main() {
    std::process::exit(soc::cli::main_from(std::env::args_os()));
}
