fn main() {
    let code = omflip::harness::cli::cli_dispatch(std::env::args_os(), &mut std::io::stdin(), &mut std::io::stdout());
    std::process::exit(code);
}
