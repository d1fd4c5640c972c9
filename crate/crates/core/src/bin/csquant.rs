fn main() {
    std::process::exit(csquant::cli::run(std::env::args_os()));
}
