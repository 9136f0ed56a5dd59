//! Fact-file readers and writers.
//!
//! Three layouts are supported, always emitted in lexicographic
//! `(source, target)` order:
//!
//! - `tsv`: `source<TAB>target`, one pair per line, no predicate name.
//! - `prolog`: `edge(S,T).` / `path(S,T).`, one fact per line.
//! - `asp`: same fact syntax as `prolog`.
//!
//! Readers skip blank lines, collapse duplicates and accept optional spaces
//! after the comma of a fact.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Predicate, Relation, UnknownName, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactFormat {
    Tsv,
    Prolog,
    Asp,
}

impl FactFormat {
    pub const ALL: [FactFormat; 3] = [Self::Tsv, Self::Prolog, Self::Asp];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tsv => "tsv",
            Self::Prolog => "prolog",
            Self::Asp => "asp",
        }
    }

    /// Conventional file extension.
    pub fn extension(self) -> &'static str {
        match self {
            Self::Tsv => "facts",
            Self::Prolog => "P",
            Self::Asp => "lp",
        }
    }
}

impl fmt::Display for FactFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FactFormat {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownName::new("fact format", s))
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: expected {expected}, found `{found}`")]
    Parse {
        line: usize,
        expected: String,
        found: String,
    },
}

pub fn write_relation<W: Write>(
    out: &mut W,
    relation: &Relation,
    predicate: Predicate,
    format: FactFormat,
) -> io::Result<()> {
    let name = predicate.name();
    for (s, t) in relation.iter() {
        match format {
            FactFormat::Tsv => writeln!(out, "{s}\t{t}")?,
            FactFormat::Prolog | FactFormat::Asp => writeln!(out, "{name}({s},{t}).")?,
        }
    }
    Ok(())
}

pub fn write_edges<W: Write>(out: &mut W, edges: &Relation, format: FactFormat) -> io::Result<()> {
    write_relation(out, edges, Predicate::Edge, format)
}

pub fn write_paths<W: Write>(out: &mut W, paths: &Relation, format: FactFormat) -> io::Result<()> {
    write_relation(out, paths, Predicate::Path, format)
}

/// Serializes into a byte buffer.
pub fn to_bytes(relation: &Relation, predicate: Predicate, format: FactFormat) -> Vec<u8> {
    let mut buf = Vec::new();
    write_relation(&mut buf, relation, predicate, format).expect("writing to a Vec cannot fail");
    buf
}

pub fn read_relation<R: BufRead>(
    input: R,
    predicate: Predicate,
    format: FactFormat,
) -> Result<Relation, ReadError> {
    let mut relation = Relation::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let pair = match format {
            FactFormat::Tsv => parse_tsv(line),
            FactFormat::Prolog | FactFormat::Asp => parse_fact(line, predicate.name()),
        };
        let (s, t) = pair.ok_or_else(|| ReadError::Parse {
            line: i + 1,
            expected: match format {
                FactFormat::Tsv => {
                    "`<source>\\t<target>` with positive integer vertices".to_string()
                }
                _ => format!(
                    "`{}(<source>,<target>).` with positive integer vertices",
                    predicate.name()
                ),
            },
            found: line.to_string(),
        })?;
        relation.insert(s, t);
    }
    Ok(relation)
}

pub fn read_edges<R: BufRead>(input: R, format: FactFormat) -> Result<Relation, ReadError> {
    read_relation(input, Predicate::Edge, format)
}

pub fn read_paths<R: BufRead>(input: R, format: FactFormat) -> Result<Relation, ReadError> {
    read_relation(input, Predicate::Path, format)
}

fn parse_vertex(s: &str) -> Option<Vertex> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&v| v >= 1)
}

fn parse_tsv(line: &str) -> Option<(Vertex, Vertex)> {
    let (s, t) = line.split_once('\t')?;
    Some((parse_vertex(s)?, parse_vertex(t)?))
}

fn parse_fact(line: &str, name: &str) -> Option<(Vertex, Vertex)> {
    let args = line
        .strip_prefix(name)?
        .strip_prefix('(')?
        .strip_suffix(").")?;
    let (s, t) = args.split_once(',')?;
    Some((parse_vertex(s)?, parse_vertex(t.trim_start_matches(' '))?))
}
