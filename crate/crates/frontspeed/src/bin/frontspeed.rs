fn main() {
    std::process::exit(frontspeed::cli::run());
}
