fn main() {
    std::process::exit(qgforge::cli::run())
}
