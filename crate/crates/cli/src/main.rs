use std::io::Write;

fn main() {
    let (code, stdout, stderr) = mft::run(std::env::args_os());
    if let Some(msg) = stderr {
        eprintln!("{msg}");
    }
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{stdout}");
    let _ = out.flush();
    std::process::exit(code);
}
