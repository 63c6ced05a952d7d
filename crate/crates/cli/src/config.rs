//! `key = value` run files.
//!
//! Keys are the long flag names of the chosen subcommand (plus `threads`).
//! File entries are spliced in front of the command-line flags, and the
//! command is built with `args_override_self`, so flags given on the command
//! line win.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Command};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, got `{raw}`", i + 1);
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        out.push(Entry {
            key,
            value: v.trim().to_string(),
        });
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<Entry>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("in {}", path.display()))
}

/// Turns file entries into flags for `subcommand`, rejecting keys the
/// subcommand does not accept.
pub fn to_flags(cmd: &Command, subcommand: &str, entries: &[Entry]) -> Result<Vec<String>> {
    let sub = cmd
        .find_subcommand(subcommand)
        .with_context(|| format!("unknown subcommand `{subcommand}`"))?;
    let mut flags = Vec::new();
    for e in entries {
        let arg = sub
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(e.key.as_str()) && a.get_long() != Some("config"));
        let Some(arg) = arg else {
            bail!("unknown config key `{}` for `{subcommand}`", e.key);
        };
        match arg.get_action() {
            ArgAction::SetTrue => match e.value.as_str() {
                "true" | "yes" | "1" => flags.push(format!("--{}", e.key)),
                "false" | "no" | "0" => {}
                v => bail!("config key `{}` expects true or false, got `{v}`", e.key),
            },
            _ => flags.push(format!("--{}={}", e.key, e.value)),
        }
    }
    Ok(flags)
}
