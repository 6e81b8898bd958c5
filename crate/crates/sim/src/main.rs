fn main() {
    std::process::exit(blockade_sim::cli::run(std::env::args_os()));
}
