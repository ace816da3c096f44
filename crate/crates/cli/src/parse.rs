//! The instance file format.
//!
//! ```text
//! # comment
//! var x1 a b
//! var x4 b c
//! z 0 6
//! ```
//!
//! One `var <name> <token>...` line per variable, in variable order, and
//! exactly one `z <min> <max>` line. Blank lines and lines starting with
//! `#` are ignored.

use softalldiff::{Instance, InstanceError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {kind}")]
    Line { line: usize, kind: LineError },
    #[error("no `var` lines")]
    NoVariables,
    #[error("missing `z` line")]
    MissingZ,
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LineError {
    #[error("`var` needs a name and at least one value")]
    EmptyVar,
    #[error("duplicate variable `{0}`")]
    DuplicateVar(String),
    #[error("duplicate `z` line (first on line {0})")]
    DuplicateZ(usize),
    #[error("`z` takes exactly two integer bounds")]
    ZArity,
    #[error("`{0}` is not an integer")]
    NotAnInteger(String),
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("{0}")]
    Instance(InstanceError),
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut vars: Vec<(String, Vec<String>)> = Vec::new();
    let mut z: Option<(usize, i64, i64)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |kind| ParseError::Line { line, kind };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut words = trimmed.split_whitespace();
        match words.next() {
            Some("var") => {
                let name = words.next().ok_or_else(|| err(LineError::EmptyVar))?;
                let tokens: Vec<String> = words.map(str::to_owned).collect();
                if tokens.is_empty() {
                    return Err(err(LineError::EmptyVar));
                }
                if vars.iter().any(|(n, _)| n == name) {
                    return Err(err(LineError::DuplicateVar(name.to_owned())));
                }
                vars.push((name.to_owned(), tokens));
            }
            Some("z") => {
                if let Some((first, _, _)) = z {
                    return Err(err(LineError::DuplicateZ(first)));
                }
                let bounds: Vec<&str> = words.collect();
                let [lo, hi] = bounds[..] else {
                    return Err(err(LineError::ZArity));
                };
                let int = |s: &str| {
                    s.parse::<i64>()
                        .map_err(|_| err(LineError::NotAnInteger(s.to_owned())))
                };
                let (lo, hi) = (int(lo)?, int(hi)?);
                if lo > hi {
                    return Err(err(LineError::Instance(InstanceError::InvertedZBounds {
                        min: lo,
                        max: hi,
                    })));
                }
                if hi < 0 {
                    return Err(err(LineError::Instance(InstanceError::NegativeZMax(hi))));
                }
                z = Some((line, lo, hi));
            }
            Some(other) => return Err(err(LineError::UnknownDirective(other.to_owned()))),
            None => unreachable!("blank lines are skipped"),
        }
    }

    if vars.is_empty() {
        return Err(ParseError::NoVariables);
    }
    let (_, lo, hi) = z.ok_or(ParseError::MissingZ)?;
    Ok(Instance::build(vars, (lo, hi))?)
}
