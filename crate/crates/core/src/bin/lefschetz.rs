fn main() {
    std::process::exit(lefschetz::cli::run());
}
