fn main() {
    std::process::exit(scoh::cli::main_from_env());
}
