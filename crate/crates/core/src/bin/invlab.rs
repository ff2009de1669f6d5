fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(invlab::harness::cli::cli_main(&args));
}
