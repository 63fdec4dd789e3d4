fn main() {
    std::process::exit(lzero::run(std::env::args_os()));
}
