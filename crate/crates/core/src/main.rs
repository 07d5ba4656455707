fn main() {
    std::process::exit(delayed_choice::cli::run(std::env::args_os()));
}
