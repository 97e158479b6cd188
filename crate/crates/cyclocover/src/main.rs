fn main() {
    std::process::exit(cyclocover::cli::main_entry());
}
