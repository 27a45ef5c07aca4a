fn main() {
    std::process::exit(toriclass_cli::run(std::env::args_os()));
}
