fn main() {
    std::process::exit(qpt_overlap_cli::run(std::env::args_os()));
}
