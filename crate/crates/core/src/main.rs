fn main() {
    std::process::exit(spinwigner::cli::run(std::env::args_os()));
}
