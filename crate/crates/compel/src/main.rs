fn main() {
    std::process::exit(compel::cli::run(std::env::args()));
}
