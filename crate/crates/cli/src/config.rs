//! `--config FILE` support.
//!
//! The file holds `key = value` lines whose keys are long flag names of the
//! chosen subcommand. They are spliced into argv right after the subcommand
//! so that flags given on the command line, which come later, win.

use std::ffi::OsString;
use std::fs;

use anyhow::{bail, Context, Result};

const SUBCOMMANDS: &[&str] = &["cluster", "synth", "eval", "preprocess", "export"];

/// Parses a config file into flag tokens.
pub fn config_tokens(text: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", n + 1);
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            bail!("config line {}: empty key", n + 1);
        }
        if key == "config" || key == "workers" {
            bail!("config line {}: {key} must be given on the command line", n + 1);
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Result<Option<String>> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let arg = arg.to_string_lossy();
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            let Some(path) = it.next() else {
                bail!("--config needs a file");
            };
            return Ok(Some(path.to_string_lossy().into_owned()));
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Ok(Some(path.to_owned()));
        }
    }
    Ok(None)
}

/// Returns argv with the config file's flags inserted after the subcommand.
pub fn expand_args(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).with_context(|| format!("cannot read config {path}"))?;
    let tokens = config_tokens(&text).with_context(|| format!("in config {path}"))?;
    let Some(pos) = argv.iter().position(|a| SUBCOMMANDS.iter().any(|s| a == *s)) else {
        return Ok(argv);
    };
    let mut out = argv[..=pos].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_from_lines() {
        let t = config_tokens("# comment\nmin_cluster_size = 3\nno-memo = true\nsweep = false\n").unwrap();
        assert_eq!(t, ["--min-cluster-size", "3", "--no-memo"].map(OsString::from));
    }

    #[test]
    fn rejects_line_without_equals() {
        assert!(config_tokens("seed 3").is_err());
    }

    #[test]
    fn config_lands_after_subcommand() {
        let dir = std::env::temp_dir().join(format!("fetclust-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.conf");
        fs::write(&path, "seed = 3\n").unwrap();
        let argv: Vec<OsString> = [
            "fetclust",
            "--config",
            path.to_str().unwrap(),
            "synth",
            "--seed",
            "5",
        ]
        .map(OsString::from)
        .to_vec();
        let out = expand_args(argv).unwrap();
        let tail: Vec<_> = out[4..].iter().map(|s| s.to_str().unwrap()).collect();
        assert_eq!(tail, ["--seed", "3", "--seed", "5"]);
        fs::remove_dir_all(dir).unwrap();
    }
}
