fn main() {
    std::process::exit(sixfold_cli::run(std::env::args_os()));
}
