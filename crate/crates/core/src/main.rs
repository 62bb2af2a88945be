fn main() {
    std::process::exit(conformable_bateman::cli::run(std::env::args_os()));
}
