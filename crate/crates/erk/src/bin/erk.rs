fn main() {
    std::process::exit(erk::cli::main());
}
