fn main() {
    std::process::exit(gromov_walk::cli::main(std::env::args_os()));
}
