fn main() {
    std::process::exit(qbnf::cli::run(std::env::args_os()));
}
