//! Text formats: the `tomonoid v1` table file and JSON record lines.
//!
//! A table file is a header line `tomonoid v1 n=<size>` followed by `n` rows
//! of whitespace-separated entries, bottom row first. Lines starting with `#`
//! and blank lines are ignored.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{verify_table, Elem, IdempotentPair, TomonoidTable, VerifyReport};
use crate::coextend::CoextensionChoice;
use crate::generator::{Flags, GenRecord};

pub const HEADER_PREFIX: &str = "tomonoid v1 n=";

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected header `tomonoid v1 n=<size>`")]
    Header { line: usize },

    #[error("line {line}: {msg}")]
    Dimension { line: usize, msg: String },

    #[error("line {line}: entry {value} is outside 0..{size}")]
    OutOfRange { line: usize, value: String, size: usize },

    #[error("table violates the tomonoid axioms\n{0}")]
    Axioms(VerifyReport),
}

impl ParseError {
    /// Stable code per error category.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Header { .. } => "E-HEADER",
            Self::Dimension { .. } => "E-DIMENSION",
            Self::OutOfRange { .. } => "E-RANGE",
            Self::Axioms(_) => "E-AXIOM",
        }
    }
}

/// Parses a table file and rejects tables that fail the axioms.
pub fn parse_table(doc: &str) -> Result<TomonoidTable, ParseError> {
    let t = parse_table_unverified(doc)?;
    let report = verify_table(&t);
    if report.ok() {
        Ok(t)
    } else {
        Err(ParseError::Axioms(report))
    }
}

/// Parses the shape and range only.
pub fn parse_table_unverified(doc: &str) -> Result<TomonoidTable, ParseError> {
    let mut lines = doc
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(ParseError::Header { line: 1 })?;
    let size: usize = header
        .strip_prefix(HEADER_PREFIX)
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n >= 1)
        .ok_or(ParseError::Header { line: header_line })?;

    let mut rows = Vec::with_capacity(size);
    let mut last_line = header_line;
    for (line, text) in lines {
        last_line = line;
        if rows.len() == size {
            return Err(ParseError::Dimension {
                line,
                msg: format!("more than {size} rows"),
            });
        }
        let row = text
            .split_whitespace()
            .map(|tok| match tok.parse::<Elem>() {
                Ok(v) if v < size => Ok(v),
                _ => Err(ParseError::OutOfRange {
                    line,
                    value: tok.to_string(),
                    size,
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != size {
            return Err(ParseError::Dimension {
                line,
                msg: format!("row {} has {} entries, expected {size}", rows.len(), row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != size {
        return Err(ParseError::Dimension {
            line: last_line,
            msg: format!("found {} rows, expected {size}", rows.len()),
        });
    }
    TomonoidTable::from_rows(rows).map_err(|e| ParseError::Dimension {
        line: header_line,
        msg: e.to_string(),
    })
}

pub fn format_table(t: &TomonoidTable) -> String {
    let mut out = format!("{HEADER_PREFIX}{}\n", t.size());
    for row in t.rows() {
        let cells: Vec<String> = row.iter().map(Elem::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsLine {
    pub commutative: bool,
    pub archimedean: bool,
}

/// One JSON line per generated tomonoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLine {
    pub n: usize,
    pub table: Vec<Vec<Elem>>,
    pub parent: Option<usize>,
    pub pair: Option<[Elem; 2]>,
    pub choice: Option<CoextensionChoice>,
    pub flags: FlagsLine,
}

impl RecordLine {
    pub fn new(
        table: &TomonoidTable,
        parent: Option<usize>,
        pair: Option<IdempotentPair>,
        choice: Option<CoextensionChoice>,
    ) -> Self {
        let flags = Flags::of(table);
        Self {
            n: table.size(),
            table: table.to_rows(),
            parent,
            pair: pair.map(|p| [p.left, p.right]),
            choice,
            flags: FlagsLine {
                commutative: flags.commutative,
                archimedean: flags.archimedean,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record lines always serialise")
    }

    pub fn from_json(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }

    pub fn to_table(&self) -> crate::error::Result<TomonoidTable> {
        let t = TomonoidTable::from_rows(self.table.clone())?;
        if t.size() != self.n {
            return Err(crate::error::TomoError::Structure(format!(
                "record declares n={} but holds a table of size {}",
                self.n,
                t.size()
            )));
        }
        Ok(t)
    }

    pub fn pair(&self) -> Option<IdempotentPair> {
        self.pair.map(|[l, r]| IdempotentPair::new(l, r))
    }
}

impl From<&GenRecord> for RecordLine {
    fn from(r: &GenRecord) -> Self {
        Self::new(&r.table, r.parent, r.pair, r.choice.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NILPOTENT: &str = "tomonoid v1 n=3\n0 0 0\n0 0 1\n0 1 2\n";

    #[test]
    fn parses_trivial_document() {
        let t = parse_table("tomonoid v1 n=1\n0\n").unwrap();
        assert_eq!(t, TomonoidTable::trivial());
    }

    #[test]
    fn round_trip_with_comments() {
        let doc = "# a nilpotent table\ntomonoid v1 n=3\n0 0 0\n# middle\n0  0 1\n0 1 2\n";
        let t = parse_table(doc).unwrap();
        assert_eq!(format_table(&t), NILPOTENT);
        assert_eq!(parse_table(&format_table(&t)).unwrap(), t);
    }

    #[test]
    fn errors_are_distinct() {
        let dim = parse_table("tomonoid v1 n=3\n0 0 0\n0 0\n0 1 2\n").unwrap_err();
        assert_eq!(dim.code(), "E-DIMENSION");
        let rows = parse_table("tomonoid v1 n=3\n0 0 0\n0 1 2\n").unwrap_err();
        assert_eq!(rows.code(), "E-DIMENSION");
        let range = parse_table("tomonoid v1 n=3\n0 0 0\n0 0 7\n0 1 2\n").unwrap_err();
        assert_eq!(range.code(), "E-RANGE");
        let header = parse_table("tomonoid v2 n=3\n").unwrap_err();
        assert_eq!(header.code(), "E-HEADER");
        let axioms = parse_table("tomonoid v1 n=3\n0 0 0\n0 2 1\n0 1 2\n").unwrap_err();
        assert_eq!(axioms.code(), "E-AXIOM");
        let text = axioms.to_string();
        assert!(text.contains("monotonicity") && text.contains("row 1"), "{text}");
    }

    #[test]
    fn record_line_shape() {
        let t = parse_table(NILPOTENT).unwrap();
        let line = RecordLine::new(
            &t,
            Some(1),
            Some(IdempotentPair::new(1, 1)),
            Some(CoextensionChoice::new([0])),
        );
        assert_eq!(
            line.to_json(),
            r#"{"n":3,"table":[[0,0,0],[0,0,1],[0,1,2]],"parent":1,"pair":[1,1],"choice":[0],"flags":{"commutative":true,"archimedean":true}}"#
        );
        let back = RecordLine::from_json(&line.to_json()).unwrap();
        assert_eq!(back, line);
        assert_eq!(back.to_table().unwrap(), t);
    }
}
