fn main() {
    std::process::exit(xgc::cli::run());
}
