//! A small S-expression reader for derivation files.
//!
//! Atoms are bare symbols or double-quoted strings; `;` comments run to the
//! end of the line. Inside strings only `\"` and `\\` are escapes, so PCF
//! lambdas such as `"\x. x"` can be written without doubling the backslash.

use std::fmt;

use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Symbol { text: String, line: usize, col: usize },
    Str { text: String, line: usize, col: usize },
    List { items: Vec<Sexp>, line: usize, col: usize },
}

impl Sexp {
    pub fn position(&self) -> (usize, usize) {
        match self {
            Sexp::Symbol { line, col, .. } | Sexp::Str { line, col, .. } | Sexp::List { line, col, .. } => {
                (*line, *col)
            }
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.position();
        ParseError::new(line, col, message)
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Sexp::Symbol { text, .. } => Some(text),
            _ => None,
        }
    }

    /// A symbol or a string, whichever was written.
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Sexp::Symbol { text, .. } | Sexp::Str { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            _ => None,
        }
    }

    /// For `(head rest...)`, the head symbol and the rest.
    pub fn as_form(&self) -> Option<(&str, &[Sexp])> {
        let items = self.as_list()?;
        let (head, rest) = items.split_first()?;
        Some((head.as_symbol()?, rest))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Symbol { text, .. } => f.write_str(text),
            Sexp::Str { text, .. } => {
                f.write_str("\"")?;
                for c in text.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            Sexp::List { items, .. } => {
                f.write_str("(")?;
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Reader {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::new(self.line, self.col, message)
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        self.skip_blank();
        let (line, col) = (self.line, self.col);
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.peek() {
                        None => return Err(ParseError::new(line, col, "unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List { items, line, col });
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(self.error("unexpected `)`")),
            Some('"') => {
                self.bump();
                let mut text = String::new();
                loop {
                    match self.bump() {
                        None => return Err(ParseError::new(line, col, "unterminated string")),
                        Some('"') => return Ok(Sexp::Str { text, line, col }),
                        Some('\\') if matches!(self.peek(), Some('"' | '\\')) => {
                            text.push(self.bump().unwrap_or('\\'));
                        }
                        Some(c) => text.push(c),
                    }
                }
            }
            Some(_) => {
                let mut text = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    text.push(c);
                    self.bump();
                }
                Ok(Sexp::Symbol { text, line, col })
            }
        }
    }
}

/// Reads exactly one S-expression from `src`.
pub fn parse_sexp(src: &str) -> Result<Sexp, ParseError> {
    let mut r = Reader {
        chars: src.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let e = r.read()?;
    r.skip_blank();
    if r.peek().is_some() {
        return Err(r.error("trailing input after the expression"));
    }
    Ok(e)
}
