fn main() {
    std::process::exit(pcpa_cli::run(std::env::args_os()));
}
