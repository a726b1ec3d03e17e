fn main() {
    shockvar::cli::init_logging();
    let mut stdout = std::io::stdout().lock();
    std::process::exit(shockvar::cli::main_with(std::env::args_os(), &mut stdout));
}
