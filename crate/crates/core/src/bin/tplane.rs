fn main() {
    let (code, _) = tplane::cli::run(std::env::args_os());
    std::process::exit(code);
}
