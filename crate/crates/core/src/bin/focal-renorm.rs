fn main() {
    std::process::exit(focal_renorm::cli::run(std::env::args_os()));
}
