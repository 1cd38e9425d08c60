fn main() {
    std::process::exit(trackfem::cli::run(std::env::args_os()));
}
