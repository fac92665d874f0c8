fn main() {
    std::process::exit(duplex_cli::dispatch(std::env::args_os()));
}
