fn main() {
    std::process::exit(swingnet::xplab::cli(std::env::args()));
}
