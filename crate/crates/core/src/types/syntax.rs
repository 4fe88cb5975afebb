use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::index::parse::parse_index;
use crate::index::term::{canonical_binder, fresh_name};
use crate::index::IndexTerm;
use crate::pcf::PcfType;
use crate::syntax::{Cursor, ParseError};

/// `σ, τ ::= Nat[I, J] | A ⊸ σ`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasicType {
    Nat(IndexTerm, IndexTerm),
    Arrow(Box<ModalType>, Box<BasicType>),
}

/// `[a < I] σ`: the instances `σ[a := 0]`, ..., `σ[a := I - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModalType {
    pub binder: String,
    pub bound: IndexTerm,
    pub body: BasicType,
}

pub fn nat(lo: IndexTerm, hi: IndexTerm) -> BasicType {
    BasicType::Nat(lo, hi)
}

/// `Nat[I]`, sugar for `Nat[I, I]`.
pub fn nat1(i: IndexTerm) -> BasicType {
    BasicType::Nat(i.clone(), i)
}

pub fn arrow(dom: ModalType, cod: BasicType) -> BasicType {
    BasicType::Arrow(Box::new(dom), Box::new(cod))
}

pub fn modal(binder: &str, bound: IndexTerm, body: BasicType) -> ModalType {
    ModalType {
        binder: binder.to_string(),
        bound,
        body,
    }
}

impl BasicType {
    pub fn erase(&self) -> PcfType {
        match self {
            BasicType::Nat(..) => PcfType::Nat,
            BasicType::Arrow(a, t) => PcfType::arrow(a.body.erase(), t.erase()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            BasicType::Nat(i, j) => {
                let mut fv = i.free_vars();
                fv.extend(j.free_vars());
                fv
            }
            BasicType::Arrow(a, t) => {
                let mut fv = a.free_vars();
                fv.extend(t.free_vars());
                fv
            }
        }
    }

    /// Every index term occurring in the type, binders' scopes ignored.
    pub fn index_terms(&self) -> Vec<&IndexTerm> {
        match self {
            BasicType::Nat(i, j) => vec![i, j],
            BasicType::Arrow(a, t) => {
                let mut v = a.index_terms();
                v.extend(t.index_terms());
                v
            }
        }
    }

    pub fn subst(&self, var: &str, with: &IndexTerm) -> BasicType {
        match self {
            BasicType::Nat(i, j) => BasicType::Nat(i.subst(var, with), j.subst(var, with)),
            BasicType::Arrow(a, t) => arrow(a.subst(var, with), t.subst(var, with)),
        }
    }

    pub fn canonical(&self) -> BasicType {
        self.canonical_at(0)
    }

    pub(crate) fn canonical_at(&self, depth: usize) -> BasicType {
        match self {
            BasicType::Nat(i, j) => BasicType::Nat(i.canonical_at(depth), j.canonical_at(depth)),
            BasicType::Arrow(a, t) => arrow(a.canonical_at(depth), t.canonical_at(depth)),
        }
    }

    pub fn alpha_eq(&self, other: &BasicType) -> bool {
        self.canonical() == other.canonical()
    }
}

impl ModalType {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut fv = self.body.free_vars();
        fv.remove(&self.binder);
        fv.extend(self.bound.free_vars());
        fv
    }

    pub fn index_terms(&self) -> Vec<&IndexTerm> {
        let mut v = vec![&self.bound];
        v.extend(self.body.index_terms());
        v
    }

    /// `σ[a := J]` for `[a < I] σ`.
    pub fn instance(&self, at: &IndexTerm) -> BasicType {
        self.body.subst(&self.binder, at)
    }

    /// The same type with its binder renamed to `to`.
    pub fn rename(&self, to: &str) -> ModalType {
        if to == self.binder {
            return self.clone();
        }
        modal(to, self.bound.clone(), self.instance(&IndexTerm::Var(to.to_string())))
    }

    pub fn subst(&self, var: &str, with: &IndexTerm) -> ModalType {
        let bound = self.bound.subst(var, with);
        if var == self.binder {
            return modal(&self.binder, bound, self.body.clone());
        }
        let with_fv = with.free_vars();
        let this = if with_fv.contains(&self.binder) {
            let mut avoid = with_fv;
            avoid.extend(self.body.free_vars());
            avoid.insert(var.to_string());
            self.rename(&fresh_name(&self.binder, &avoid))
        } else {
            self.clone()
        };
        modal(&this.binder, bound, this.body.subst(var, with))
    }

    pub fn canonical(&self) -> ModalType {
        self.canonical_at(0)
    }

    pub(crate) fn canonical_at(&self, depth: usize) -> ModalType {
        let canon = canonical_binder(depth);
        let renamed = self.rename(&canon);
        modal(&canon, self.bound.canonical_at(depth), renamed.body.canonical_at(depth + 1))
    }

    pub fn alpha_eq(&self, other: &ModalType) -> bool {
        self.canonical() == other.canonical()
    }
}

// Printing

fn write_modal_body(f: &mut fmt::Formatter<'_>, body: &BasicType) -> fmt::Result {
    match body {
        BasicType::Nat(..) => write!(f, "{body}"),
        BasicType::Arrow(..) => write!(f, "({body})"),
    }
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicType::Nat(i, j) if i == j => write!(f, "Nat[{i}]"),
            BasicType::Nat(i, j) => write!(f, "Nat[{i}, {j}]"),
            BasicType::Arrow(a, t) => write!(f, "{a} -o {t}"),
        }
    }
}

impl fmt::Display for ModalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.binder == "_" {
            write!(f, "[{}] ", self.bound)?;
        } else {
            write!(f, "[{} < {}] ", self.binder, self.bound)?;
        }
        write_modal_body(f, &self.body)
    }
}

// Parsing
//
//   basic ::= modal (-o | ⊸) basic | Nat[I] | Nat[I, J] | ( basic )
//   modal ::= [a < I] atom | [I] atom
//   atom  ::= Nat[..] | ( basic )

pub(crate) fn parse_basic(cur: &mut Cursor) -> Result<BasicType, ParseError> {
    if cur.is_punct("[") {
        let a = parse_modal(cur)?;
        if !(cur.eat_punct("-o") || cur.eat_punct("⊸")) {
            return Err(cur.unexpected("`-o` after a modal type"));
        }
        return Ok(arrow(a, parse_basic(cur)?));
    }
    parse_atom(cur)
}

fn parse_atom(cur: &mut Cursor) -> Result<BasicType, ParseError> {
    if cur.eat_punct("(") {
        let t = parse_basic(cur)?;
        cur.expect_punct(")")?;
        return Ok(t);
    }
    if cur.is_keyword("Nat") {
        cur.bump();
        cur.expect_punct("[")?;
        let lo = parse_index(cur)?;
        let hi = if cur.eat_punct(",") {
            parse_index(cur)?
        } else {
            lo.clone()
        };
        cur.expect_punct("]")?;
        return Ok(BasicType::Nat(lo, hi));
    }
    Err(cur.unexpected("a type"))
}

pub(crate) fn parse_modal(cur: &mut Cursor) -> Result<ModalType, ParseError> {
    cur.expect_punct("[")?;
    let binder = match (cur.peek(), cur.peek_at(1)) {
        (crate::syntax::Tok::Ident(name), crate::syntax::Tok::Punct("<")) => {
            let name = name.clone();
            cur.bump();
            cur.bump();
            name
        }
        _ => "_".to_string(),
    };
    let bound = parse_index(cur)?;
    cur.expect_punct("]")?;
    let body = parse_atom(cur)?;
    Ok(ModalType {
        binder,
        bound,
        body,
    })
}

impl FromStr for BasicType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s)?;
        let t = parse_basic(&mut cur)?;
        cur.expect_eof()?;
        Ok(t)
    }
}

impl FromStr for ModalType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s)?;
        let t = parse_modal(&mut cur)?;
        cur.expect_eof()?;
        Ok(t)
    }
}
