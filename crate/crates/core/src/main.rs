use std::io;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let env = std::env::var(mgl_core::cli::SEMIRING_ENV).ok();
    let code = mgl_core::cli::run(&args, env.as_deref(), &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
