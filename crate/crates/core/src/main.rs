fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = levy_tails::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
