use std::io::Write;

fn main() {
    let mut out = std::io::stdout().lock();
    let code = tits_e6::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
