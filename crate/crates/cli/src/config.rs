//! `key = value` files mirroring the long flags of a subcommand.
//!
//! ```text
//! # defaults for `verify`
//! p = 5..13
//! mode = both
//! quiet = true
//! ```
//!
//! Lines are spliced into the argument list after the subcommand name;
//! flags given on the command line win.

use std::collections::BTreeSet;
use std::path::Path;

use clap::Command;

#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}: {}", self.path, self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Long flag names present in `args`.
fn given_flags(args: &[String]) -> BTreeSet<String> {
    args.iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split_once('=').map_or(a, |(k, _)| k).to_string())
        .collect()
}

/// Turn the file's lines into flags for `sub`, skipping keys already set.
pub fn file_args(
    path: &Path,
    text: &str,
    cmd: &Command,
    sub: &str,
    given: &[String],
) -> Result<Vec<String>, ConfigError> {
    let sub_cmd = cmd.find_subcommand(sub);
    let known: Vec<&clap::Arg> = cmd
        .get_arguments()
        .chain(sub_cmd.into_iter().flat_map(|c| c.get_arguments()))
        .filter(|a| a.get_long().is_some())
        .collect();
    let given = given_flags(given);
    let err = |line: usize, column: usize, message: String| ConfigError {
        path: path.display().to_string(),
        line,
        column,
        message,
    };
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_start();
        let indent = raw.len() - line.len();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(i + 1, indent + 1, "expected `key = value`".into()));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(arg) = known.iter().find(|a| a.get_long() == Some(key)) else {
            return Err(err(i + 1, indent + 1, format!("unknown key `{key}` for `{sub}`")));
        };
        if key == "config" {
            return Err(err(i + 1, indent + 1, "config files cannot include other files".into()));
        }
        if given.contains(key) {
            continue;
        }
        let column = raw.find('=').unwrap_or(0) + 2;
        if arg.get_action().takes_values() {
            if value.is_empty() {
                return Err(err(i + 1, column, format!("missing value for `{key}`")));
            }
            out.push(format!("--{key}"));
            out.push(value.to_string());
        } else {
            match value {
                "true" | "yes" | "1" => out.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => {
                    return Err(err(
                        i + 1,
                        column,
                        format!("`{key}` takes true or false, got `{value}`"),
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// Splice the config file named by `--config` (if any) into `argv`.
pub fn expand(argv: Vec<String>, cmd: &Command) -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let names: Vec<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
    let Some(pos) = argv
        .iter()
        .skip(1)
        .position(|a| names.contains(&a.as_str()))
        .map(|i| i + 1)
    else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let extra = file_args(Path::new(&path), &text, cmd, &argv[pos], &argv)?;
    let mut out = argv[..=pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}
