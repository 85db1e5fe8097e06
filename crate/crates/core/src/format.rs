//! Plain-text scheme files.
//!
//! ```text
//! n 6
//! # comments and blank lines are ignored
//! 1+2+3 = 6
//! 1+6 < 3+5
//! ```
//!
//! The header names the number of coins. Each further line is one weighing,
//! left pan, relation, right pan. An empty pan is written `0`. The parser
//! tolerates extra spaces and leading comments; [`serialize_scheme`] always
//! emits the canonical form (ascending coins, single spaces around the
//! relation, LF endings).

use thiserror::Error;

use crate::model::{ModelError, Relation, Scheme, Weighing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing header line `n <count>`")]
    MissingHeader,
    #[error("line {line}: coin {label} is outside 1..={n}")]
    LabelOutOfRange { line: usize, label: u32, n: u32 },
    #[error("line {line}: coin {label} is used more than once")]
    DuplicateCoin { line: usize, label: u32 },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: ModelError },
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_spaces(&mut self) {
        while matches!(self.bytes.get(self.pos), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::Syntax {
                line: self.line,
                column: start + 1,
                message: "expected an integer".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError::Syntax {
                line: self.line,
                column: start + 1,
                message: "integer too large".into(),
            })
    }

    /// `INT ("+" INT)*`, or a lone `0` for an empty pan.
    fn pan(&mut self) -> Result<Vec<u32>, ParseError> {
        let mut coins = vec![self.integer()?];
        loop {
            self.skip_spaces();
            if self.peek() != Some(b'+') {
                break;
            }
            self.pos += 1;
            self.skip_spaces();
            coins.push(self.integer()?);
        }
        if coins == [0] {
            coins.clear();
        }
        Ok(coins)
    }

    fn relation(&mut self) -> Result<Relation, ParseError> {
        let r = match self.peek() {
            Some(b'<') => Relation::Less,
            Some(b'=') => Relation::Equal,
            Some(b'>') => Relation::Greater,
            _ => return Err(self.err("expected one of `<`, `=`, `>`")),
        };
        self.pos += 1;
        Ok(r)
    }
}

fn check_pans(line: usize, n: u32, left: &[u32], right: &[u32]) -> Result<(), ParseError> {
    let mut seen = vec![false; n as usize + 1];
    for &label in left.iter().chain(right) {
        if label == 0 || label > n {
            return Err(ParseError::LabelOutOfRange { line, label, n });
        }
        if std::mem::replace(&mut seen[label as usize], true) {
            return Err(ParseError::DuplicateCoin { line, label });
        }
    }
    Ok(())
}

/// Parses a scheme file.
pub fn parse_scheme(text: &[u8]) -> Result<Scheme, ParseError> {
    let mut n: Option<u32> = None;
    let mut weighings = Vec::new();

    for (idx, raw) in text.split(|&b| b == b'\n').enumerate() {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let mut cur = Cursor {
            bytes: raw,
            pos: 0,
            line: idx + 1,
        };
        cur.skip_spaces();
        match cur.peek() {
            None | Some(b'#') => continue,
            _ => {}
        }

        let Some(count) = n else {
            if cur.peek() != Some(b'n') {
                return Err(ParseError::MissingHeader);
            }
            cur.pos += 1;
            if !matches!(cur.peek(), Some(b' ' | b'\t')) {
                return Err(cur.err("expected a space after `n`"));
            }
            cur.skip_spaces();
            let count = cur.integer()?;
            cur.skip_spaces();
            if cur.peek().is_some() {
                return Err(cur.err("unexpected text after header"));
            }
            if count == 0 {
                return Err(cur.err("n must be positive"));
            }
            n = Some(count);
            continue;
        };

        let left = cur.pan()?;
        cur.skip_spaces();
        let relation = cur.relation()?;
        cur.skip_spaces();
        let right = cur.pan()?;
        cur.skip_spaces();
        if cur.peek().is_some() {
            return Err(cur.err("unexpected text after weighing"));
        }
        check_pans(cur.line, count, &left, &right)?;
        let w = Weighing::new(left, right, relation).map_err(|source| ParseError::Invalid {
            line: cur.line,
            source,
        })?;
        weighings.push(w);
    }

    let n = n.ok_or(ParseError::MissingHeader)?;
    Scheme::new(n, weighings).map_err(|source| ParseError::Invalid { line: 0, source })
}

/// Canonical text form of a scheme.
pub fn serialize_scheme(s: &Scheme) -> Vec<u8> {
    let mut out = format!("n {}\n", s.n());
    for w in s.weighings() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out.into_bytes()
}
