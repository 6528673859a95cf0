fn main() {
    std::process::exit(solinas_div::cli::run(std::env::args_os()));
}
