use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::parse::parse_index;
use super::term::IndexTerm;
use crate::syntax::{Cursor, ParseError, Tok};

const BUILTINS: [(&str, usize); 4] = [("0", 0), ("1", 0), ("+", 2), ("∸", 2)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("rules {first} and {second} have overlapping left-hand sides")]
    Overlap { first: usize, second: usize },
    #[error("symbol `{0}` is used with an arity different from its declaration")]
    Arity(String),
    #[error("symbol `{0}` is not declared")]
    UnknownSymbol(String),
    #[error("builtin symbol `{0}` cannot be redeclared or redefined")]
    Builtin(String),
    #[error("rule {rule}: variable `{name}` occurs on the right but not on the left")]
    UnboundRhsVar { rule: usize, name: String },
    #[error("rule {rule}: variable `{name}` is repeated on the left")]
    NonLinear { rule: usize, name: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Function symbols with their arities. The builtins `0`, `1`, `+` and
/// `∸` are always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature {
            symbols: BUILTINS.iter().map(|(s, a)| (s.to_string(), *a)).collect(),
        }
    }
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, symbol: &str, arity: usize) -> Result<(), ProgramError> {
        if BUILTINS.iter().any(|(b, _)| *b == symbol) {
            return Err(ProgramError::Builtin(symbol.to_string()));
        }
        match self.symbols.get(symbol) {
            Some(&a) if a != arity => Err(ProgramError::Arity(symbol.to_string())),
            _ => {
                self.symbols.insert(symbol.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.symbols.get(symbol).copied()
    }

    /// Checks every application in `t` against the declared arities.
    pub fn check_term(&self, t: &IndexTerm) -> Result<(), ProgramError> {
        for (f, n) in t.symbols() {
            match self.arity(&f) {
                None => return Err(ProgramError::UnknownSymbol(f)),
                Some(a) if a != n => return Err(ProgramError::Arity(f)),
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// Constructor pattern over `{x, 0, p+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Var(String),
    Zero,
    Succ(Box<Pattern>),
}

impl Pattern {
    pub fn numeral(n: u64) -> Pattern {
        (0..n).fold(Pattern::Zero, |p, _| Pattern::Succ(Box::new(p)))
    }

    fn vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Pattern::Var(v) => out.push(v),
            Pattern::Zero => {}
            Pattern::Succ(p) => p.vars(out),
        }
    }

    /// Whether some natural matches both patterns (they are renamed apart).
    fn overlaps(&self, other: &Pattern) -> bool {
        match (self, other) {
            (Pattern::Var(_), _) | (_, Pattern::Var(_)) => true,
            (Pattern::Zero, Pattern::Zero) => true,
            (Pattern::Succ(p), Pattern::Succ(q)) => p.overlaps(q),
            _ => false,
        }
    }

    pub(crate) fn matches<'p>(&'p self, n: u64, binds: &mut Vec<(&'p str, u64)>) -> bool {
        match self {
            Pattern::Var(v) => {
                binds.push((v, n));
                true
            }
            Pattern::Zero => n == 0,
            Pattern::Succ(p) => n > 0 && p.matches(n - 1, binds),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut depth = 0;
        let mut p = self;
        while let Pattern::Succ(inner) = p {
            depth += 1;
            p = inner;
        }
        match p {
            Pattern::Zero => write!(f, "{depth}"),
            Pattern::Var(v) if depth == 0 => f.write_str(v),
            Pattern::Var(v) => write!(f, "{v} + {depth}"),
            Pattern::Succ(_) => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub symbol: String,
    pub args: Vec<Pattern>,
    pub rhs: IndexTerm,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.symbol)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ") = {}", self.rhs)
    }
}

/// A validated orthogonal constructor rewriting system.
#[derive(Debug, Clone, Default)]
pub struct EquationalProgram {
    signature: Signature,
    rules: Vec<Equation>,
    by_symbol: HashMap<String, Vec<usize>>,
}

/// Validates `rules` against `signature`: arities, linearity of left-hand
/// sides, right-hand variables bound on the left, and pairwise
/// non-overlapping patterns.
pub fn register_program(
    rules: Vec<Equation>,
    signature: Signature,
) -> Result<EquationalProgram, ProgramError> {
    let mut by_symbol: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, rule) in rules.iter().enumerate() {
        if BUILTINS.iter().any(|(b, _)| *b == rule.symbol) {
            return Err(ProgramError::Builtin(rule.symbol.clone()));
        }
        match signature.arity(&rule.symbol) {
            None => return Err(ProgramError::UnknownSymbol(rule.symbol.clone())),
            Some(a) if a != rule.args.len() => {
                return Err(ProgramError::Arity(rule.symbol.clone()))
            }
            Some(_) => {}
        }
        let mut vars = Vec::new();
        rule.args.iter().for_each(|p| p.vars(&mut vars));
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(*v) {
                return Err(ProgramError::NonLinear {
                    rule: i,
                    name: v.to_string(),
                });
            }
        }
        if let Some(name) = rule.rhs.free_vars().into_iter().find(|v| !seen.contains(v.as_str())) {
            return Err(ProgramError::UnboundRhsVar { rule: i, name });
        }
        signature.check_term(&rule.rhs)?;
        let same = by_symbol.entry(rule.symbol.clone()).or_default();
        for &j in same.iter() {
            let other = &rules[j];
            if rule.args.iter().zip(&other.args).all(|(p, q)| p.overlaps(q)) {
                return Err(ProgramError::Overlap { first: j, second: i });
            }
        }
        same.push(i);
    }
    Ok(EquationalProgram {
        signature,
        rules,
        by_symbol,
    })
}

impl EquationalProgram {
    /// The program with no equations over the builtin signature.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[Equation] {
        &self.rules
    }

    pub(crate) fn rules_for(&self, symbol: &str) -> impl Iterator<Item = &Equation> {
        self.by_symbol
            .get(symbol)
            .into_iter()
            .flatten()
            .map(|&i| &self.rules[i])
    }

    /// Parses the line-oriented equation format:
    ///
    /// ```text
    /// # comment
    /// symbol f/2            # optional explicit declaration
    /// f(0, b) = b
    /// f(a + 1, b) = f(a, b) + 1
    /// ```
    ///
    /// Symbols are declared by their first left-hand side (or by a `symbol`
    /// line); right-hand sides may refer to symbols defined further down.
    pub fn parse(src: &str) -> Result<Self, ProgramError> {
        let mut signature = Signature::new();
        let mut rules = Vec::new();
        for (lineno, line) in src.lines().enumerate() {
            let mut cur = Cursor::new(line).map_err(|e| at_line(e, lineno))?;
            if cur.at_eof() {
                continue;
            }
            if cur.is_keyword("symbol") && matches!(cur.peek_at(1), Tok::Ident(_)) {
                cur.bump();
                let name = cur.expect_ident().map_err(|e| at_line(e, lineno))?;
                cur.expect_punct("/").map_err(|e| at_line(e, lineno))?;
                let arity = cur.expect_num().map_err(|e| at_line(e, lineno))?;
                cur.expect_eof().map_err(|e| at_line(e, lineno))?;
                signature.declare(&name, arity as usize)?;
                continue;
            }
            let eq = parse_equation(&mut cur).map_err(|e| at_line(e, lineno))?;
            signature.declare(&eq.symbol, eq.args.len())?;
            rules.push(eq);
        }
        register_program(rules, signature)
    }
}

impl FromStr for EquationalProgram {
    type Err = ProgramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EquationalProgram::parse(s)
    }
}

fn at_line(mut e: ParseError, lineno: usize) -> ParseError {
    e.line = lineno + 1;
    e
}

fn parse_equation(cur: &mut Cursor) -> Result<Equation, ParseError> {
    let symbol = cur.expect_ident()?;
    cur.expect_punct("(")?;
    let mut args = Vec::new();
    if !cur.eat_punct(")") {
        loop {
            args.push(parse_pattern(cur)?);
            if cur.eat_punct(")") {
                break;
            }
            cur.expect_punct(",")?;
        }
    }
    cur.expect_punct("=")?;
    let rhs = parse_index(cur)?;
    cur.expect_eof()?;
    Ok(Equation { symbol, args, rhs })
}

/// `x`, `n`, `p + n` or `(p)`; `n` abbreviates `0 + 1 + ... + 1`.
fn parse_pattern(cur: &mut Cursor) -> Result<Pattern, ParseError> {
    let mut p = match cur.bump() {
        Tok::Ident(v) => Pattern::Var(v),
        Tok::Num(n) => Pattern::numeral(n),
        Tok::Punct("(") => {
            let p = parse_pattern(cur)?;
            cur.expect_punct(")")?;
            p
        }
        _ => return Err(cur.error("expected a pattern (variable, numeral or p + n)")),
    };
    while cur.eat_punct("+") {
        let n = cur.expect_num()?;
        for _ in 0..n {
            p = Pattern::Succ(Box::new(p));
        }
    }
    Ok(p)
}
