fn main() {
    std::process::exit(bfree_lab::cli::run(std::env::args_os()));
}
