fn main() {
    std::process::exit(j1j2_cli::run(std::env::args_os()));
}
