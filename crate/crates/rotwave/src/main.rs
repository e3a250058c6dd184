fn main() {
    std::process::exit(rotwave::run(std::env::args_os()));
}
