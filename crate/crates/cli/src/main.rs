fn main() {
    std::process::exit(oamsim_cli::run(std::env::args_os()));
}
