fn main() {
    std::process::exit(crtwist::cli::run());
}
