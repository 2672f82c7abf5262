fn main() {
    std::process::exit(fracsob_cli::run(std::env::args_os()));
}
