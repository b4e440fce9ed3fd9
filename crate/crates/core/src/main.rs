use std::io;
use std::process;

fn main() {
    let code = lmg_krylov::cli::main_with_args(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr(),
    );
    process::exit(code);
}
