//! `key=value` configuration files, merged underneath command-line flags.
//!
//! Keys are long flag names without the leading dashes. A key already given
//! on the command line is ignored; `name=true` switches a boolean flag on.

use std::path::Path;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key=value, got '{raw}'", i + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.starts_with('-') {
            return Err(format!("config line {}: bad key '{k}'", i + 1));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Location of `--config`'s value in argv, if any.
fn config_path(argv: &[String]) -> Result<Option<String>, String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned().map(Some).ok_or_else(|| "--config needs a path".to_string());
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}

fn given_on_command_line(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    argv.iter().any(|a| *a == flag || a.starts_with(&prefix))
}

/// argv with config-file entries appended as flags.
pub fn merge(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| format!("cannot read config '{path}': {e}"))?;
    let mut merged = argv.clone();
    for (k, v) in parse(&text)? {
        if k == "config" {
            return Err("config files cannot nest".into());
        }
        if given_on_command_line(&argv, &k) {
            continue;
        }
        match v.as_str() {
            "true" => merged.push(format!("--{k}")),
            "false" => {}
            _ => {
                merged.push(format!("--{k}"));
                merged.push(v);
            }
        }
    }
    Ok(merged)
}
