//! Manifold corpora: one description per line with `#` comments, and an
//! optional sidecar table of expected verdicts, one `|`-separated row per
//! description.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use circledom_core::decision::{decide, DecisionError, Query};
use circledom_core::manifold::{parse_manifold, Manifold};
use serde::Serialize;

pub const BUNDLED_CORPUS: &str = include_str!("../corpus/manifolds.txt");
pub const BUNDLED_EXPECTED: &str = include_str!("../corpus/manifolds.expected");

pub const QUERIES: [Query; 4] = [
    Query::Product,
    Query::NontrivialBundle,
    Query::AnyBundle,
    Query::Presentable,
];

/// Outcome of one query on one corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Token {
    Yes,
    No,
    /// The query is undefined for this input.
    Err,
    /// The description was refused.
    Reject,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Token::Yes => "YES",
            Token::No => "NO",
            Token::Err => "ERR",
            Token::Reject => "REJECT",
        })
    }
}

impl FromStr for Token {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "YES" => Ok(Token::Yes),
            "NO" => Ok(Token::No),
            "ERR" => Ok(Token::Err),
            "REJECT" => Ok(Token::Reject),
            other => Err(format!("unknown verdict '{other}'")),
        }
    }
}

pub type Row = [Token; 4];

#[derive(Debug, Clone)]
pub struct Corpus {
    pub entries: Vec<String>,
    pub expected: Option<BTreeMap<String, Row>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_entries(text: &str) -> Vec<String> {
    content_lines(text).map(|(_, l)| l.to_string()).collect()
}

pub fn parse_expected(text: &str) -> Result<BTreeMap<String, Row>, String> {
    let mut table = BTreeMap::new();
    for (line, content) in content_lines(text) {
        let cells: Vec<&str> = content.split('|').map(str::trim).collect();
        let [desc, verdicts @ ..] = cells.as_slice() else {
            unreachable!()
        };
        if verdicts.len() != 4 {
            return Err(format!(
                "line {line}: expected a description and 4 verdicts"
            ));
        }
        let mut row = [Token::Err; 4];
        for (slot, cell) in row.iter_mut().zip(verdicts) {
            *slot = cell.parse().map_err(|e| format!("line {line}: {e}"))?;
        }
        table.insert(desc.to_string(), row);
    }
    Ok(table)
}

impl Corpus {
    pub fn bundled() -> Corpus {
        Corpus {
            entries: parse_entries(BUNDLED_CORPUS),
            expected: Some(parse_expected(BUNDLED_EXPECTED).expect("bundled table is well formed")),
        }
    }

    /// Loads `path` and, if present, the sidecar with extension `.expected`.
    pub fn load(path: &Path) -> Result<Corpus, String> {
        let text =
            fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let sidecar = path.with_extension("expected");
        let expected = if sidecar.exists() && sidecar != path {
            let t = fs::read_to_string(&sidecar)
                .map_err(|e| format!("cannot read {}: {e}", sidecar.display()))?;
            Some(parse_expected(&t).map_err(|e| format!("{}: {e}", sidecar.display()))?)
        } else {
            None
        };
        Ok(Corpus {
            entries: parse_entries(&text),
            expected,
        })
    }
}

pub fn load_manifold(desc: &str) -> Result<Manifold, String> {
    let m = parse_manifold(desc).map_err(|e| format!("cannot parse '{desc}': {e}"))?;
    m.normalize().map_err(|e| e.to_string())
}

/// Verdicts of the four queries, or `Err` with an internal failure message.
pub fn evaluate(desc: &str) -> Result<Row, String> {
    let Ok(m) = load_manifold(desc) else {
        return Ok([Token::Reject; 4]);
    };
    let mut row = [Token::Err; 4];
    for (slot, q) in row.iter_mut().zip(QUERIES) {
        *slot = match decide(q, &m) {
            Ok(d) if d.verdict => Token::Yes,
            Ok(_) => Token::No,
            Err(DecisionError::FiniteFundamentalGroup { .. }) => Token::Err,
            Err(e @ DecisionError::Inconsistent(_)) => return Err(e.to_string()),
        };
    }
    Ok(row)
}
