use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::Parser;
use softalldiff_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = cli.command.file();
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map(|_| buf)
    } else {
        std::fs::read_to_string(path)
    };
    let out = match text {
        Ok(text) => run(&cli, &text),
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let _ = io::stdout().write_all(out.stdout.as_bytes());
    let _ = io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
