//! `key=value` config files, spliced into the argument list ahead of the
//! command-line flags so that later flags win.

use std::fs;

/// Inserts the flags of the file named by `--config`
/// right after the subcommand. Blank lines and `#` comments are skipped;
/// `key=true` / `key=false` toggle switches such as `bond`.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("config file {path}: {e}"))?;
    let mut spliced = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key=value, got {line:?}", number + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            continue;
        }
        match value {
            "true" => spliced.push(format!("--{key}")),
            "false" => {}
            _ => {
                spliced.push(format!("--{key}"));
                spliced.push(value.to_string());
            }
        }
    }
    let at = 2.min(argv.len());
    let mut out = argv[..at].to_vec();
    out.extend(spliced);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut found = None;
    let mut args = argv.iter().skip(2);
    while let Some(arg) = args.next() {
        if arg == "--config" {
            found = args.next().cloned();
        } else if let Some(path) = arg.strip_prefix("--config=") {
            found = Some(path.to_string());
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn file_flags_precede_command_line_flags() {
        let dir = std::env::temp_dir().join(format!("percolab-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        fs::write(&path, "# comment\neps = 0.7\ngraph_seed=3\nbond=true\nhist=false\n\n").unwrap();
        let p = path.to_str().unwrap();
        let out = expand(args(&["percolab", "ercp", "--config", p, "--eps", "0.5"])).unwrap();
        assert_eq!(
            out,
            args(&["percolab", "ercp", "--eps", "0.7", "--graph-seed", "3", "--bond", "--config", p, "--eps", "0.5"])
        );
        fs::write(&path, "oops\n").unwrap();
        assert!(expand(args(&["percolab", "gw", &format!("--config={p}")])).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn no_config_is_identity() {
        let a = args(&["percolab", "gw", "--d", "3"]);
        assert_eq!(expand(a.clone()).unwrap(), a);
    }
}
