fn main() {
    std::process::exit(phasecart::cli::run(std::env::args_os()));
}
