fn main() {
    std::process::exit(zeta_paircorr::cli::main_with_args(std::env::args_os()));
}
