fn main() {
    std::process::exit(enercast::cli::run());
}
