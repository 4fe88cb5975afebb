//! Concrete syntax for index terms and constraints.
//!
//! ```text
//! I ::= I + I | I - I | n | a | f(I, ..., I)
//!     | sum(a < I, I) | forest(a, I, I, I) | (I)
//! C ::= I rel I        rel ::= <= | < | = | >= | >
//! ```
//! `-` (also written `∸`) is truncated subtraction.

use std::str::FromStr;

use super::entail::{Constraint, Rel};
use super::term::IndexTerm;
use crate::syntax::{Cursor, ParseError, Tok};

pub(crate) fn parse_index(cur: &mut Cursor) -> Result<IndexTerm, ParseError> {
    let mut lhs = parse_atom(cur)?;
    loop {
        if cur.eat_punct("+") {
            lhs = lhs + parse_atom(cur)?;
        } else if cur.eat_punct("-") || cur.eat_punct("∸") {
            lhs = lhs - parse_atom(cur)?;
        } else {
            return Ok(lhs);
        }
    }
}

fn parse_atom(cur: &mut Cursor) -> Result<IndexTerm, ParseError> {
    match cur.peek().clone() {
        Tok::Num(n) => {
            cur.bump();
            Ok(IndexTerm::Lit(n))
        }
        Tok::Punct("(") => {
            cur.bump();
            let t = parse_index(cur)?;
            cur.expect_punct(")")?;
            Ok(t)
        }
        Tok::Ident(name) => {
            cur.bump();
            if !cur.is_punct("(") {
                return Ok(IndexTerm::Var(name));
            }
            cur.bump();
            match name.as_str() {
                "sum" => {
                    let binder = cur.expect_ident()?;
                    cur.expect_punct("<")?;
                    let bound = parse_index(cur)?;
                    cur.expect_punct(",")?;
                    let body = parse_index(cur)?;
                    cur.expect_punct(")")?;
                    Ok(super::term::sum(&binder, bound, body))
                }
                "forest" => {
                    let binder = cur.expect_ident()?;
                    cur.expect_punct(",")?;
                    let start = parse_index(cur)?;
                    cur.expect_punct(",")?;
                    let count = parse_index(cur)?;
                    cur.expect_punct(",")?;
                    let body = parse_index(cur)?;
                    cur.expect_punct(")")?;
                    Ok(super::term::forest(&binder, start, count, body))
                }
                _ => {
                    let mut args = Vec::new();
                    if !cur.eat_punct(")") {
                        loop {
                            args.push(parse_index(cur)?);
                            if cur.eat_punct(")") {
                                break;
                            }
                            cur.expect_punct(",")?;
                        }
                    }
                    Ok(IndexTerm::App(name, args))
                }
            }
        }
        _ => Err(cur.unexpected("an index term")),
    }
}

pub(crate) fn parse_constraint(cur: &mut Cursor) -> Result<Constraint, ParseError> {
    let lhs = parse_index(cur)?;
    let (rel, flip) = match cur.bump() {
        Tok::Punct("<=") => (Rel::Le, false),
        Tok::Punct("<") => (Rel::Lt, false),
        Tok::Punct("=") => (Rel::Eq, false),
        Tok::Punct(">=") => (Rel::Le, true),
        Tok::Punct(">") => (Rel::Lt, true),
        Tok::Punct("~=") => (Rel::Kleene, false),
        _ => return Err(cur.error("expected a relation (<=, <, =, >=, >, ~=)")),
    };
    let rhs = parse_index(cur)?;
    Ok(if flip {
        Constraint::new(rhs, rel, lhs)
    } else {
        Constraint::new(lhs, rel, rhs)
    })
}

impl FromStr for IndexTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s)?;
        let t = parse_index(&mut cur)?;
        cur.expect_eof()?;
        Ok(t)
    }
}

impl FromStr for Constraint {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s)?;
        let c = parse_constraint(&mut cur)?;
        cur.expect_eof()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::term::*;

    fn p(s: &str) -> IndexTerm {
        s.parse().unwrap()
    }

    #[test]
    fn operators_are_left_associative() {
        assert_eq!(p("a - b - 1"), (var("a") - var("b")) - lit(1));
        assert_eq!(p("a - (b + 1)"), var("a") - (var("b") + lit(1)));
        assert_eq!(p("a ∸ 1"), var("a") - lit(1));
    }

    #[test]
    fn binders_and_applications() {
        assert_eq!(
            p("forest(b, 0, 1, gt(a, b))"),
            forest("b", lit(0), lit(1), app("gt", vec![var("a"), var("b")]))
        );
        assert_eq!(p("sum(g < a - b, 1)"), sum("g", var("a") - var("b"), lit(1)));
        assert_eq!(p("k()"), app("k", vec![]));
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "a + sum(b < a + 1, a - b)",
            "mult(2, a - b - 1)",
            "forest(b, b + 1, e, gt(a, b)) + b + 1",
            "a - (b + (c - 1))",
        ] {
            assert_eq!(p(&p(s).to_string()), p(s), "{s}");
        }
    }

    #[test]
    fn constraints_normalize_direction() {
        let c: Constraint = "a - b >= 1".parse().unwrap();
        assert_eq!(c, Constraint::new(lit(1), Rel::Le, var("a") - var("b")));
        let c: Constraint = "b < a + 1".parse().unwrap();
        assert_eq!(c.rel, Rel::Lt);
    }

    #[test]
    fn errors_carry_positions() {
        let e = "a + ".parse::<IndexTerm>().unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("index term"));
    }
}
