//! Surface syntax for PCF programs.
//!
//! ```text
//! term ::= \x[:T]. term | λx[:T]. term | fix f[:T]. term
//!        | ifz term then term else term
//!        | arg+ [trailing binder form]
//! arg  ::= x | n | s arg | p arg | ( term )
//! T    ::= Nat | T -> T | ( T )
//! ```
//! `s(e)` and `p(e)` are just `s`/`p` applied to a parenthesised argument.
//! Application is left-associative; `->` is right-associative.

use std::str::FromStr;

use super::term::{Binder, PcfType, Term};
use crate::syntax::{Cursor, ParseError, Tok};

const KEYWORDS: &[&str] = &["s", "p", "ifz", "then", "else", "fix", "Nat"];

pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = parse_term(&mut cur, &mut Vec::new())?;
    cur.expect_eof()?;
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<PcfType, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = pcf_type(&mut cur)?;
    cur.expect_eof()?;
    Ok(t)
}

fn pcf_type(cur: &mut Cursor) -> Result<PcfType, ParseError> {
    let dom = if cur.eat_punct("(") {
        let t = pcf_type(cur)?;
        cur.expect_punct(")")?;
        t
    } else if cur.is_keyword("Nat") {
        cur.bump();
        PcfType::Nat
    } else {
        return Err(cur.unexpected("a type"));
    };
    if cur.eat_punct("->") || cur.eat_punct("→") {
        Ok(PcfType::arrow(dom, pcf_type(cur)?))
    } else {
        Ok(dom)
    }
}

fn starts_binder_form(cur: &Cursor) -> bool {
    cur.is_punct("\\") || cur.is_punct("λ") || cur.is_keyword("fix") || cur.is_keyword("ifz")
}

fn starts_arg(cur: &Cursor) -> bool {
    match cur.peek() {
        Tok::Num(_) => true,
        Tok::Punct("(") => true,
        Tok::Ident(s) => s == "s" || s == "p" || !KEYWORDS.contains(&s.as_str()),
        _ => false,
    }
}

fn binder(cur: &mut Cursor, scope: &mut Vec<String>) -> Result<(Binder, Term), ParseError> {
    let name = cur.expect_ident()?;
    if KEYWORDS.contains(&name.as_str()) {
        return Err(cur.error(format!("`{name}` is reserved")));
    }
    let ty = if cur.eat_punct(":") {
        Some(pcf_type(cur)?)
    } else {
        None
    };
    cur.expect_punct(".")?;
    scope.push(name.clone());
    let body = parse_term(cur, scope);
    scope.pop();
    Ok((Binder::new(&name, ty), body?))
}

fn parse_term(cur: &mut Cursor, scope: &mut Vec<String>) -> Result<Term, ParseError> {
    if cur.eat_punct("\\") || cur.eat_punct("λ") {
        let (b, body) = binder(cur, scope)?;
        return Ok(Term::lam(b, body));
    }
    if cur.is_keyword("fix") {
        cur.bump();
        let (b, body) = binder(cur, scope)?;
        return Ok(Term::fix(b, body));
    }
    if cur.is_keyword("ifz") {
        cur.bump();
        let scrut = parse_term(cur, scope)?;
        cur.expect_keyword("then")?;
        let zero = parse_term(cur, scope)?;
        cur.expect_keyword("else")?;
        let succ = parse_term(cur, scope)?;
        return Ok(Term::ifz(scrut, zero, succ));
    }
    let mut t = parse_arg(cur, scope)?;
    loop {
        if starts_arg(cur) {
            t = Term::app(t, parse_arg(cur, scope)?);
        } else if starts_binder_form(cur) {
            return Ok(Term::app(t, parse_term(cur, scope)?));
        } else {
            return Ok(t);
        }
    }
}

fn parse_arg(cur: &mut Cursor, scope: &mut Vec<String>) -> Result<Term, ParseError> {
    match cur.peek().clone() {
        Tok::Num(n) => {
            cur.bump();
            Ok(Term::Const(n))
        }
        Tok::Punct("(") => {
            cur.bump();
            let t = parse_term(cur, scope)?;
            cur.expect_punct(")")?;
            Ok(t)
        }
        Tok::Ident(s) if s == "s" => {
            cur.bump();
            Ok(Term::succ(parse_arg(cur, scope)?))
        }
        Tok::Ident(s) if s == "p" => {
            cur.bump();
            Ok(Term::pred(parse_arg(cur, scope)?))
        }
        Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
            match scope.iter().rev().position(|v| *v == name) {
                Some(i) => {
                    cur.bump();
                    Ok(Term::Var(i))
                }
                None => Err(cur.error(format!("unbound identifier `{name}`"))),
            }
        }
        _ => Err(cur.unexpected("a term")),
    }
}

impl FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl FromStr for PcfType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}
