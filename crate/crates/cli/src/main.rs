fn main() {
    std::process::exit(ptic_cli::run(std::env::args_os()));
}
