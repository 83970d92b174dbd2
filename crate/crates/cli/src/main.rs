fn main() {
    std::process::exit(sgcov_cli::app::run(std::env::args_os()));
}
