use std::io::Write;

fn main() {
    let color = symloc::cli::color_enabled();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = symloc::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock(), color);
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
