fn main() {
    std::process::exit(cpn_sigma::cli::main_entry());
}
