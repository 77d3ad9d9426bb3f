fn main() {
    let code = duality_kit::cli::dispatch(std::env::args().skip(1));
    std::process::exit(code);
}
