//! Flat `key = value` config files, spliced into the argument list so that
//! flags given on the command line take precedence.

use std::ffi::OsString;
use std::fs;

pub const COMMANDS: &[&str] = &["gen-cbe", "gen-mbe", "analyze", "certify", "rho-star", "sweep"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

/// Inserts the config entries right after the subcommand name. Later
/// occurrences of a flag override earlier ones, so the command line wins.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a path")?.to_string_lossy().into_owned());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut injected = Vec::new();
    for (k, v) in parse(&text)? {
        match v.as_str() {
            "true" => injected.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => {
                injected.push(OsString::from(format!("--{k}")));
                injected.push(OsString::from(v));
            }
        }
    }
    let pos = rest
        .iter()
        .position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or("a config file needs a subcommand")?;
    rest.splice(pos + 1..pos + 1, injected);
    Ok(rest)
}
