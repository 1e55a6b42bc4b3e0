fn main() {
    std::process::exit(kraus_cli::run(std::env::args_os()));
}
