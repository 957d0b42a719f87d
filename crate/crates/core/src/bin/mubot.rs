fn main() {
    std::process::exit(mubot::expsuite::cli::main());
}
