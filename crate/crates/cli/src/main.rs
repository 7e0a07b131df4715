mod commands;
#[cfg(test)]
mod coverage;
mod registry;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;

use crate::registry::CliError;
use crate::report::Format;

fn main() -> ExitCode {
    let reg = commands::registry();
    let matches = match reg.clap().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let format = sub
        .get_one::<String>("format")
        .and_then(|f| Format::parse(f))
        .unwrap_or(Format::Plain);
    let command = reg.get(name).expect("clap only accepts registered subcommands");
    match command.run(sub) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(format).as_bytes());
            let _ = out.flush();
            for n in &report.notes {
                eprintln!("{n}");
            }
            ExitCode::from(if report.verified { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            let mut app = reg.clap();
            app.build();
            let usage = app.find_subcommand_mut(name).map(|c| c.render_usage().to_string()).unwrap_or_default();
            eprintln!("error: {msg}\n\n{usage}\n\nFor more information, try 'padic-interp {name} --help'.");
            ExitCode::from(2)
        }
        Err(CliError::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
