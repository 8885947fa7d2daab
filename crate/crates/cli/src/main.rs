fn main() {
    std::process::exit(wallx_cli::run(std::env::args_os()));
}
