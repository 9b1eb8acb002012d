fn main() {
    std::process::exit(gjms6::cli::main_entry());
}
