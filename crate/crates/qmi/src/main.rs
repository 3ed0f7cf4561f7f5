fn main() {
    std::process::exit(qmi::cli::main_entry());
}
