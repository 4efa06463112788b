use std::io::Write;

fn main() {
    let out = dlinterp_cli::run(std::env::args_os());
    if out.code == dlinterp_cli::EXIT_ERROR {
        eprint!("{}", out.stdout);
    } else {
        print!("{}", out.stdout);
        let _ = std::io::stdout().flush();
    }
    std::process::exit(out.code);
}
