use std::io::Write;

fn main() {
    let (code, out, err) = liffig::cli::run_args(std::env::args_os().skip(1));
    // a closed pipe is not worth a panic
    if !out.is_empty() {
        let _ = writeln!(std::io::stdout(), "{}", out.trim_end());
    }
    if !err.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", err.trim_end());
    }
    std::process::exit(code);
}
