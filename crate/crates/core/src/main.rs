fn main() {
    std::process::exit(metocean_joint::cli::run(std::env::args_os()));
}
