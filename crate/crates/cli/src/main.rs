fn main() {
    std::process::exit(darboux_cli::run(std::env::args_os()));
}
