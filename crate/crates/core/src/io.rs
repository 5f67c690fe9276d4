//! The plain-text blocks file.
//!
//! ```text
//! # comments may appear on any line starting with '#'
//! v 13
//! b 26
//! 0 1 3
//! ...
//! ```
//!
//! Headers `v` and `b` each appear once before the first data line. Each
//! data line is a strictly increasing list of 0-based point indices and
//! there are exactly `b` of them. Whitespace-only lines are ignored.

use std::fmt;

use thiserror::Error;

use crate::design::{Design, DesignError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownHeader(String),
    DuplicateHeader(char),
    MissingHeader(char),
    HeaderAfterData,
    MalformedHeader,
    BadInteger(String),
    NotIncreasing,
    IndexOverflow { index: usize, v: usize },
    CountMismatch { declared: usize, found: usize },
    TooManyBlocks { declared: usize },
    Design(DesignError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownHeader(k) => write!(f, "unknown header key '{k}'"),
            ParseErrorKind::DuplicateHeader(k) => write!(f, "duplicate header '{k}'"),
            ParseErrorKind::MissingHeader(k) => write!(f, "missing header '{k}'"),
            ParseErrorKind::HeaderAfterData => write!(f, "header after the first block line"),
            ParseErrorKind::MalformedHeader => write!(f, "header must be '<key> <integer>'"),
            ParseErrorKind::BadInteger(tok) => write!(f, "expected a non-negative integer, found '{tok}'"),
            ParseErrorKind::NotIncreasing => write!(f, "point indices must be strictly increasing"),
            ParseErrorKind::IndexOverflow { index, v } => write!(f, "point {index} out of range for v = {v}"),
            ParseErrorKind::CountMismatch { declared, found } => {
                write!(f, "declared {declared} blocks, found {found}")
            }
            ParseErrorKind::TooManyBlocks { declared } => {
                write!(f, "more block lines than the declared {declared}")
            }
            ParseErrorKind::Design(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c == ' ' || c == '\t', start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_int(line: usize, col: usize, tok: &str) -> Result<usize, ParseError> {
    if !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, col, ParseErrorKind::BadInteger(tok.to_string())));
    }
    tok.parse()
        .map_err(|_| err(line, col, ParseErrorKind::BadInteger(tok.to_string())))
}

/// Parses a blocks file into a normalized design.
pub fn parse_blocks_file(text: &str) -> Result<Design, ParseError> {
    let mut v: Option<usize> = None;
    let mut b: Option<usize> = None;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.split('\n').enumerate() {
        let ln = idx + 1;
        last_line = ln;
        if line.starts_with('#') || line.trim_matches([' ', '\t']).is_empty() {
            continue;
        }
        let toks = tokens(line);
        let (col, first) = toks[0];
        if first.starts_with(|c: char| c.is_ascii_alphabetic()) {
            let slot = match first {
                "v" => &mut v,
                "b" => &mut b,
                _ => return Err(err(ln, col, ParseErrorKind::UnknownHeader(first.to_string()))),
            };
            let key = first.chars().next().unwrap();
            if !blocks.is_empty() {
                return Err(err(ln, col, ParseErrorKind::HeaderAfterData));
            }
            if slot.is_some() {
                return Err(err(ln, col, ParseErrorKind::DuplicateHeader(key)));
            }
            if toks.len() != 2 {
                return Err(err(ln, col, ParseErrorKind::MalformedHeader));
            }
            *slot = Some(parse_int(ln, toks[1].0, toks[1].1)?);
            continue;
        }
        let Some(vv) = v else {
            return Err(err(ln, col, ParseErrorKind::MissingHeader('v')));
        };
        let Some(bb) = b else {
            return Err(err(ln, col, ParseErrorKind::MissingHeader('b')));
        };
        if blocks.len() == bb {
            return Err(err(ln, col, ParseErrorKind::TooManyBlocks { declared: bb }));
        }
        let mut block = Vec::with_capacity(toks.len());
        for &(c, tok) in &toks {
            let x = parse_int(ln, c, tok)?;
            if x >= vv {
                return Err(err(ln, c, ParseErrorKind::IndexOverflow { index: x, v: vv }));
            }
            if block.last().is_some_and(|&prev| prev >= x) {
                return Err(err(ln, c, ParseErrorKind::NotIncreasing));
            }
            block.push(x);
        }
        blocks.push(block);
    }

    let v = v.ok_or_else(|| err(last_line, 1, ParseErrorKind::MissingHeader('v')))?;
    let b = b.ok_or_else(|| err(last_line, 1, ParseErrorKind::MissingHeader('b')))?;
    if blocks.len() != b {
        return Err(err(
            last_line,
            1,
            ParseErrorKind::CountMismatch { declared: b, found: blocks.len() },
        ));
    }
    Design::new(v, blocks).map_err(|e| err(last_line, 1, ParseErrorKind::Design(e)))
}

/// Canonical blocks file: headers then one normalized block per line.
pub fn write_blocks_file(d: &Design) -> String {
    let mut out = format!("v {}\nb {}\n", d.v(), d.b());
    for block in d.blocks() {
        let line: Vec<String> = block.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let d = parse_blocks_file("v 3\nb 1\n0 1 2\n").unwrap();
        assert_eq!(d, Design::new(3, vec![vec![0, 1, 2]]).unwrap());
    }

    #[test]
    fn count_mismatch_message() {
        let e = parse_blocks_file("v 3\nb 2\n0 1 2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::CountMismatch { declared: 2, found: 1 });
        assert!(e.to_string().contains("declared 2 blocks, found 1"));
    }

    #[test]
    fn comments_anywhere() {
        let text = "# head\nv 4\n# mid\nb 2\n0 1\n# between\n2 3\n# tail\n";
        assert_eq!(parse_blocks_file(text).unwrap().b(), 2);
    }

    #[test]
    fn strictness() {
        let cases: &[(&str, usize, usize)] = &[
            ("v 3\nk 2\n", 2, 1),
            ("v 3\nv 4\n", 2, 1),
            ("b 1\n0 1\n", 2, 1),
            ("v 3\nb 1\n0 1 3\n", 3, 5),
            ("v 3\nb 1\n0 2 1\n", 3, 5),
            ("v 3\nb 1\n0 x\n", 3, 3),
            ("v 3\nb 1\n0 1\nb 1\n", 4, 1),
            ("v 3\nb 1\n0 1\n1 2\n", 4, 1),
            ("v 3 4\nb 1\n", 1, 1),
            ("v -3\n", 1, 3),
        ];
        for &(text, line, col) in cases {
            let e = parse_blocks_file(text).unwrap_err();
            assert_eq!((e.line, e.col), (line, col), "{text:?}: {e}");
        }
    }

    #[test]
    fn empty_design_text() {
        let d = Design::empty(5);
        assert_eq!(write_blocks_file(&d), "v 5\nb 0\n");
        assert_eq!(parse_blocks_file("v 5\nb 0\n").unwrap(), d);
    }

    #[test]
    fn missing_headers_at_eof() {
        assert_eq!(
            parse_blocks_file("").unwrap_err().kind,
            ParseErrorKind::MissingHeader('v')
        );
        assert_eq!(
            parse_blocks_file("v 2\n").unwrap_err().kind,
            ParseErrorKind::MissingHeader('b')
        );
    }
}
