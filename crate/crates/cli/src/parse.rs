//! The prospect text grammar and the scenario corpus format.
//!
//! Prospects:
//!
//! ```text
//! prospect := "(" pair (";" pair)* ")"
//! pair     := outcome "," prob
//! outcome  := number | "?"
//! ```
//!
//! Whitespace is insignificant; numbers are plain decimals with an
//! optional exponent. The canonical form printed by [`print_prospect`]
//! parses back to the identical prospect.
//!
//! Corpus files are plain-text sections:
//!
//! ```text
//! # comment
//! [case 3]
//! f = (4000, 0.8; 0, 0.2)
//! g = (3000, 1.00)
//! expect = f<g
//! interpretation = money
//! note = free text
//! ```
//!
//! `expect`, `interpretation` (default `money`), and `note` are
//! optional; case names must be unique.

use std::fmt;

use regret_fear::{Interpretation, Outcome, Prospect, ProspectError, Relation};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("parse error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Prospect {
        line: usize,
        #[source]
        source: ProspectError,
    },
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            text,
            pos: 0,
            line,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos += ch.len_utf8();
        if ch == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(ch)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == ch => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{ch}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{ch}`, found end of input"))),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let (start_line, start_col) = (self.line, self.col);
        if matches!(self.peek(), Some('+' | '-')) {
            self.bump();
        }
        let mut digits = 0;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
            digits += 1;
        }
        if self.peek() == Some('.') {
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
                digits += 1;
            }
        }
        if digits == 0 {
            return Err(ParseError::Syntax {
                line: start_line,
                col: start_col,
                message: "expected a number".into(),
            });
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            let mut exp_digits = 0;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return Err(self.error("expected exponent digits"));
            }
        }
        self.text[start..self.pos].parse::<f64>().map_err(|_| {
            ParseError::Syntax {
                line: start_line,
                col: start_col,
                message: format!("invalid number `{}`", &self.text[start..self.pos]),
            }
        })
    }

    fn outcome(&mut self) -> Result<Outcome, ParseError> {
        self.skip_ws();
        if self.peek() == Some('?') {
            self.bump();
            Ok(Outcome::Unknown)
        } else {
            Ok(Outcome::Known(self.number()?))
        }
    }
}

/// Parse a prospect from its text form.
///
/// `line` is the 1-based line number the text starts on, for error
/// reporting from corpus files; pass 1 for standalone input.
pub fn parse_prospect_at(
    text: &str,
    line: usize,
    interpretation: Interpretation,
    normalize: bool,
) -> Result<Prospect, ParseError> {
    let mut cur = Cursor::new(text, line);
    cur.expect('(')?;
    let mut branches = Vec::new();
    loop {
        let outcome = cur.outcome()?;
        cur.expect(',')?;
        let prob = cur.number()?;
        branches.push((outcome, prob));
        cur.skip_ws();
        match cur.peek() {
            Some(';') => {
                cur.bump();
            }
            Some(')') => {
                cur.bump();
                break;
            }
            Some(c) => return Err(cur.error(format!("expected `;` or `)`, found `{c}`"))),
            None => return Err(cur.error("expected `;` or `)`, found end of input")),
        }
    }
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected trailing `{c}`")));
    }
    let build = if normalize {
        Prospect::new_normalized(branches, interpretation)
    } else {
        Prospect::new(branches, interpretation)
    };
    build.map_err(|source| ParseError::Prospect { line, source })
}

/// Parse a standalone prospect text.
pub fn parse_prospect(
    text: &str,
    interpretation: Interpretation,
    normalize: bool,
) -> Result<Prospect, ParseError> {
    parse_prospect_at(text, 1, interpretation, normalize)
}

/// Canonical text form; parses back to the identical prospect.
pub fn print_prospect(p: &Prospect) -> String {
    let body: Vec<String> = p
        .branches()
        .iter()
        .map(|(outcome, prob)| format!("{outcome}, {prob}"))
        .collect();
    format!("({})", body.join("; "))
}

/// One named choice problem from a corpus file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioCase {
    pub name: String,
    pub f: Prospect,
    pub g: Prospect,
    pub expect: Option<Relation>,
    pub note: Option<String>,
}

/// An ordered corpus of named cases.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub cases: Vec<ScenarioCase>,
}

#[derive(Debug, Default)]
struct PendingCase {
    name: String,
    header_line: usize,
    f: Option<(String, usize)>,
    g: Option<(String, usize)>,
    expect: Option<Relation>,
    interpretation: Option<Interpretation>,
    note: Option<String>,
}

impl PendingCase {
    fn finish(self, normalize: bool) -> Result<ScenarioCase, ParseError> {
        let missing = |what: &str| ParseError::Syntax {
            line: self.header_line,
            col: 1,
            message: format!("case `{}` is missing `{what} = ...`", self.name),
        };
        let (f_text, f_line) = self.f.ok_or_else(|| missing("f"))?;
        let (g_text, g_line) = self.g.ok_or_else(|| missing("g"))?;
        let interpretation = self.interpretation.unwrap_or(Interpretation::Money);
        Ok(ScenarioCase {
            name: self.name,
            f: parse_prospect_at(&f_text, f_line, interpretation, normalize)?,
            g: parse_prospect_at(&g_text, g_line, interpretation, normalize)?,
            expect: self.expect,
            note: self.note,
        })
    }
}

fn parse_expect(value: &str, line: usize) -> Result<Relation, ParseError> {
    match value {
        "f>g" => Ok(Relation::FStrict),
        "f<g" => Ok(Relation::GStrict),
        "f~g" => Ok(Relation::Indifferent),
        other => Err(ParseError::Syntax {
            line,
            col: 1,
            message: format!("expect must be one of f>g, f<g, f~g; found `{other}`"),
        }),
    }
}

/// Parse a scenario corpus.
pub fn parse_corpus(text: &str, normalize: bool) -> Result<ScenarioFile, ParseError> {
    let mut cases: Vec<ScenarioCase> = Vec::new();
    let mut pending: Option<PendingCase> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ParseError::Syntax {
                    line: line_no,
                    col: raw.len(),
                    message: "unterminated case header".into(),
                })?
                .trim();
            let name = name.strip_prefix("case").map(str::trim).unwrap_or(name);
            if name.is_empty() {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: 1,
                    message: "empty case name".into(),
                });
            }
            if let Some(prev) = pending.take() {
                cases.push(prev.finish(normalize)?);
            }
            if cases.iter().any(|c| c.name == name) {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: 1,
                    message: format!("duplicate case name `{name}`"),
                });
            }
            pending = Some(PendingCase {
                name: name.to_string(),
                header_line: line_no,
                ..PendingCase::default()
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ParseError::Syntax {
                line: line_no,
                col: 1,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(case) = pending.as_mut() else {
            return Err(ParseError::Syntax {
                line: line_no,
                col: 1,
                message: "field outside any [case ...] section".into(),
            });
        };
        match key {
            "f" => case.f = Some((value.to_string(), line_no)),
            "g" => case.g = Some((value.to_string(), line_no)),
            "expect" => case.expect = Some(parse_expect(value, line_no)?),
            "interpretation" => {
                case.interpretation = Some(match value {
                    "money" => Interpretation::Money,
                    "utility" => Interpretation::Utility,
                    other => {
                        return Err(ParseError::Syntax {
                            line: line_no,
                            col: 1,
                            message: format!(
                                "interpretation must be money or utility; found `{other}`"
                            ),
                        })
                    }
                })
            }
            "note" => case.note = Some(value.to_string()),
            other => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: 1,
                    message: format!("unknown field `{other}`"),
                })
            }
        }
    }
    if let Some(prev) = pending.take() {
        cases.push(prev.finish(normalize)?);
    }
    if cases.is_empty() {
        return Err(ParseError::Syntax {
            line: 1,
            col: 1,
            message: "corpus contains no cases".into(),
        });
    }
    Ok(ScenarioFile { cases })
}

/// `{:.16e}`: 17 significant digits, enough to reparse to the same f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

impl fmt::Display for ScenarioCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[case {}] f = {}; g = {}",
            self.name,
            print_prospect(&self.f),
            print_prospect(&self.g)
        )
    }
}
