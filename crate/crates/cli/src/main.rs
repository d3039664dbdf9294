fn main() {
    std::process::exit(flipwide::run(std::env::args_os()));
}
