fn main() {
    std::process::exit(apportion_cli::run(std::env::args_os()));
}
