fn main() {
    std::process::exit(abelscope::run_from_args());
}
