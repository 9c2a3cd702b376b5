fn main() {
    std::process::exit(pseudoharmonic::cli::run(std::env::args_os()));
}
