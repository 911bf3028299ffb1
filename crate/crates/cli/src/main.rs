fn main() {
    std::process::exit(toepkern_cli::run(std::env::args_os()));
}
