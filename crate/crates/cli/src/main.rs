use std::io;

fn main() {
    let env = morsekit::Env::from_process();
    let code = morsekit::run_command(std::env::args_os(), &env, &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
