fn main() {
    std::process::exit(samf::cli::run(std::env::args_os()));
}
