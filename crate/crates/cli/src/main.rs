fn main() {
    std::process::exit(orbitint_cli::run(std::env::args_os()));
}
