fn main() {
    std::process::exit(fermispec::cli::run(std::env::args_os()));
}
