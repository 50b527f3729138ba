fn main() {
    std::process::exit(orient::cli::run(std::env::args_os()));
}
