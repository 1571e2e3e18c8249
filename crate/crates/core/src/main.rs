fn main() {
    std::process::exit(charforge::cli::main());
}
