fn main() {
    std::process::exit(sagnac_wigner::cli::main(std::env::args_os()));
}
