fn main() {
    std::process::exit(ncpoly::cli::main_with(std::env::args_os()));
}
