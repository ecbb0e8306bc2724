use std::io::{IsTerminal, Read, Write};

fn piped_stdin() -> Option<String> {
    let stdin = std::io::stdin();
    if stdin.is_terminal() {
        return None;
    }
    let mut s = String::new();
    stdin.lock().read_to_string(&mut s).ok().map(|_| s)
}

fn main() {
    let out = og6_tools::cli::run(std::env::args_os(), piped_stdin);
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
