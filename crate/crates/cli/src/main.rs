use clap::Parser;
use hindman_lab::commands::{run, Cli};
use hindman_lab::error::exit;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { exit::USAGE } else { exit::VERIFIED };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let code = run(cli).unwrap_or_else(|err| {
        eprintln!("hindman-lab: {err}");
        err.exit_code()
    });
    std::process::exit(code);
}
