fn main() {
    std::process::exit(cyclic_planes::cli::main_with_args(std::env::args_os()));
}
