fn main() {
    std::process::exit(gwbound::cli::run(std::env::args_os()));
}
