fn main() {
    std::process::exit(biquad_cli::run(std::env::args_os()));
}
