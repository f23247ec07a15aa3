fn main() {
    std::process::exit(aluthge_cli::run(std::env::args_os()));
}
