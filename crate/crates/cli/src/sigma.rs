//! System files: one `label: definition` per line, where the definition is a
//! formula or a table such as `2:0000rrrrsss1sss1`. Blank lines and `//`
//! comments are ignored.

use magari4::formula::table::looks_like_table;
use magari4::{Formula, FuncTable};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Definition {
    Formula(Formula),
    Table(FuncTable),
}

impl Definition {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        if looks_like_table(src) {
            let t: FuncTable = src.trim().parse().map_err(|e| CliError::usage(format!("bad table `{src}`: {e}")))?;
            Ok(Definition::Table(t))
        } else {
            let f: Formula = src.parse().map_err(|e| CliError::usage(format!("bad formula `{src}`: {e}")))?;
            Ok(Definition::Formula(f))
        }
    }

    /// Table over the sorted free variables, or the given table.
    pub fn table(&self) -> Result<(Vec<String>, FuncTable), CliError> {
        match self {
            Definition::Formula(f) => f.table().map_err(|e| CliError::usage(e.to_string())),
            Definition::Table(t) => Ok((magari4::synthesis::default_vars(t.arity()), t.clone())),
        }
    }
}

pub fn parse_system(text: &str) -> Result<Vec<(String, Definition)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (label, body) = line
            .split_once(':')
            .ok_or_else(|| CliError::usage(format!("line {}: expected `label: definition`", n + 1)))?;
        let label = label.trim();
        if !label.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(CliError::usage(format!("line {}: bad label `{label}`", n + 1)));
        }
        let def = Definition::parse(body).map_err(|e| CliError::usage(format!("line {}: {e}", n + 1)))?;
        out.push((label.to_string(), def));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels_tables_and_comments() {
        let sys = parse_system("// header\nF1: #p\n\nF2: 1:1sr0 // negation\n").unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[0].0, "F1");
        assert!(matches!(sys[1].1, Definition::Table(_)));
        assert_eq!(sys[1].1.table().unwrap().1.to_string(), "1:1sr0");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_system("#p").is_err());
        assert!(parse_system("1: p").is_err());
        assert!(parse_system("F1: p &").is_err());
        assert!(parse_system("F1: 1:00").is_err());
    }
}
