fn main() {
    std::process::exit(vsqe::cli::run(std::env::args_os()));
}
