fn main() {
    std::process::exit(ppoly_cli::run(std::env::args_os()));
}
