//! Reading formulas, structures and teams from the command line.

use std::fs;
use std::io::Read;

use teamcheck_core::model::{Elem, Structure, Team};

/// `-` reads stdin, `@path` reads a file, anything else is the text itself.
pub fn text_arg(arg: &str) -> Result<String, String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        read(path)
    } else {
        Ok(arg.to_string())
    }
}

pub fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

pub fn structure(path: &str) -> Result<Structure, String> {
    Structure::parse(&read(path)?).map_err(|e| format!("{path}: {e}"))
}

/// Parses a team file:
///
/// ```text
/// vars x y
/// x=0 y=1
/// y=a x=b      # labels of the structure are accepted
/// ```
///
/// A file with only the `vars` line is the empty team.
pub fn parse_team(text: &str, structure: &Structure) -> Result<Team, String> {
    let mut team: Option<Team> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| format!("line {}: {m}", i + 1);
        let mut words = line.split_whitespace();
        if line.starts_with("vars") && words.next() == Some("vars") {
            if team.is_some() {
                return Err(err("duplicate `vars` line".into()));
            }
            team = Some(Team::new(words).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let t = team.as_mut().ok_or_else(|| err("expected `vars` before rows".into()))?;
        let mut row: Vec<Option<Elem>> = vec![None; t.vars().len()];
        for binding in line.split_whitespace() {
            let (var, value) = binding
                .split_once('=')
                .ok_or_else(|| err(format!("expected var=value, found `{binding}`")))?;
            let col = t.column(var).ok_or_else(|| err(format!("`{var}` is not declared in `vars`")))?;
            if row[col].is_some() {
                return Err(err(format!("`{var}` bound twice")));
            }
            row[col] = Some(structure.element(value).map_err(|e| err(e.to_string()))?);
        }
        let row: Vec<Elem> = row
            .into_iter()
            .zip(t.vars())
            .map(|(v, name)| v.ok_or_else(|| err(format!("`{name}` is unbound"))))
            .collect::<Result<_, _>>()?;
        t.insert_row(row).map_err(|e| err(e.to_string()))?;
    }
    team.ok_or_else(|| "missing `vars` line".to_string())
}

/// One assignment per line, in the structure's labels.
pub fn render_team(team: &Team, structure: &Structure) -> Vec<String> {
    team.rows()
        .iter()
        .map(|row| {
            team.vars()
                .iter()
                .zip(row)
                .map(|(v, &e)| format!("{v}={}", structure.label(e)))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// Inclusive range `a..b` or a single value.
pub fn range(s: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range `{s}`"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Structure {
        Structure::parse("domain 3\nlabels a b c\nrel E/2 : (a,b)\n").unwrap()
    }

    #[test]
    fn team_files() {
        let t = parse_team("# team\nvars y x\nx=0 y=b\ny=c x=a\n", &k3()).unwrap();
        assert_eq!(t.vars(), ["x", "y"]);
        assert_eq!(t.len(), 2);
        assert_eq!(render_team(&t, &k3()), ["x=a y=b", "x=a y=c"]);
        assert!(parse_team("vars x\n", &k3()).unwrap().is_empty());
    }

    #[test]
    fn bad_team_files() {
        assert!(parse_team("x=0\n", &k3()).unwrap_err().contains("vars"));
        assert!(parse_team("vars x y\nx=0\n", &k3()).unwrap_err().contains("`y` is unbound"));
        assert!(parse_team("vars x\nx=7\n", &k3()).is_err());
        assert!(parse_team("vars x\nz=0\n", &k3()).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(range("6..10").unwrap(), 6..=10);
        assert_eq!(range("1..=3").unwrap(), 1..=3);
        assert_eq!(range("4").unwrap(), 4..=4);
        assert!(range("5..4").unwrap().is_empty());
        assert!(range("x").is_err());
    }
}
