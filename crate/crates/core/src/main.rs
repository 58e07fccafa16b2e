fn main() {
    std::process::exit(modelcomp::cli::run(std::env::args_os()));
}
