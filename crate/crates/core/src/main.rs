fn main() {
    std::process::exit(packminer::cli::run(std::env::args_os()));
}
