fn main() {
    std::process::exit(crestflow::cli::run(std::env::args_os()));
}
