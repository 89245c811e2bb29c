fn main() {
    std::process::exit(noonsim_cli::run(std::env::args_os()));
}
