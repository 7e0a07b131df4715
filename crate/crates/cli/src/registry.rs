use std::fmt;
use std::str::FromStr;

use clap::{Arg, ArgAction, ArgMatches};
use padic_interp::{BigRational, PadicNumber};

use crate::report::Report;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(padic_interp::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<padic_interp::Error> for CliError {
    fn from(e: padic_interp::Error) -> Self {
        CliError::Library(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// One subcommand: its flags and the library call behind it.
pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn args(&self) -> Vec<Arg>;
    fn run(&self, m: &ArgMatches) -> CliResult<Report>;
}

#[derive(Default)]
pub struct Registry {
    commands: Vec<Box<dyn Command>>,
}

impl Registry {
    pub fn register<C: Command + 'static>(&mut self, c: C) {
        assert!(self.get(c.name()).is_none(), "duplicate subcommand {}", c.name());
        self.commands.push(Box::new(c));
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Command> {
        self.commands.iter().map(|c| c.as_ref())
    }

    pub fn clap(&self) -> clap::Command {
        let mut app = clap::Command::new("padic-interp")
            .about("Exact p-adic interpolation, zeta measures and chain checks")
            .subcommand_required(true)
            .arg(
                Arg::new("format")
                    .long("format")
                    .global(true)
                    .default_value("plain")
                    .value_parser(["csv", "json", "plain"])
                    .help("Output format"),
            );
        for c in self.iter() {
            app = app.subcommand(clap::Command::new(c.name()).about(c.about()).args(c.args()));
        }
        app
    }
}

pub fn opt(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).help(help)
}

pub fn def(name: &'static str, default: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).default_value(default).help(help)
}

pub fn flag(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).action(ArgAction::SetTrue).help(help)
}

pub fn has(m: &ArgMatches, name: &str) -> bool {
    m.get_one::<String>(name).is_some()
}

pub fn on(m: &ArgMatches, name: &str) -> bool {
    m.get_flag(name)
}

pub fn raw<'a>(m: &'a ArgMatches, name: &str) -> CliResult<&'a str> {
    m.get_one::<String>(name)
        .map(String::as_str)
        .ok_or_else(|| CliError::Usage(format!("--{name} is required here")))
}

pub fn get<T: FromStr>(m: &ArgMatches, name: &str) -> CliResult<T> {
    let s = raw(m, name)?;
    s.parse().map_err(|_| CliError::Usage(format!("--{name}: cannot parse {s:?}")))
}

pub fn get_opt<T: FromStr>(m: &ArgMatches, name: &str) -> CliResult<Option<T>> {
    if has(m, name) {
        get(m, name).map(Some)
    } else {
        Ok(None)
    }
}

pub fn list<T: FromStr>(m: &ArgMatches, name: &str) -> CliResult<Vec<T>> {
    let s = raw(m, name)?;
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Usage(format!("--{name}: cannot parse {x:?}"))))
        .collect()
}

pub fn rational(m: &ArgMatches, name: &str) -> CliResult<BigRational> {
    get(m, name)
}

/// A p-adic argument: `(v, u, r)_p`, a digit expansion, or a rational.
pub fn padic_arg(m: &ArgMatches, name: &str, p: u64, prec: u32) -> CliResult<PadicNumber> {
    let s = raw(m, name)?;
    if s.starts_with('(') || s.starts_with("0_") || s.contains("O(") {
        let x: PadicNumber = s.parse()?;
        if x.p() != p {
            return usage(format!("--{name} lives in Q_{} but --p is {p}", x.p()));
        }
        return Ok(x);
    }
    let r: BigRational = s.parse().map_err(|_| CliError::Usage(format!("--{name}: cannot parse {s:?}")))?;
    Ok(PadicNumber::from_rational(&r, p, prec)?)
}
