use std::collections::HashMap;

use thiserror::Error;

use super::entail::Assignment;
use super::program::EquationalProgram;
use super::term::IndexTerm;

/// Nesting limit for rewrite and forest recursion. Exceeding it is reported
/// as fuel exhaustion: both only ever signal a computation that was cut off.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// No equation matches a ground redex, or an unbound variable was hit.
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("arithmetic overflow")]
    Overflow,
}

/// Evaluates `t` under `rho`, rewriting applications innermost-first
/// against `program`. Each rewrite, bounded-sum iteration and forest node
/// consumes one unit of `fuel`.
pub fn eval_index(
    t: &IndexTerm,
    rho: &Assignment,
    program: &EquationalProgram,
    fuel: u64,
) -> Result<u64, EvalError> {
    let mut scope: Vec<(&str, u64)> = rho.iter().map(|(k, v)| (k.as_str(), v)).collect();
    Evaluator::new(program, fuel).eval(t, &mut scope)
}

pub(crate) struct Evaluator<'a> {
    program: &'a EquationalProgram,
    fuel: u64,
    depth: usize,
}

type Memo = HashMap<(u64, u64), u64>;

impl<'a> Evaluator<'a> {
    pub fn new(program: &'a EquationalProgram, fuel: u64) -> Self {
        Evaluator {
            program,
            fuel,
            depth: 0,
        }
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::FuelExhausted);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn enter(&mut self) -> Result<(), EvalError> {
        if self.depth >= MAX_DEPTH {
            return Err(EvalError::FuelExhausted);
        }
        self.depth += 1;
        Ok(())
    }

    /// `scope` is searched from the end, so later entries shadow earlier ones.
    pub fn eval(
        &mut self,
        t: &'a IndexTerm,
        scope: &mut Vec<(&'a str, u64)>,
    ) -> Result<u64, EvalError> {
        match t {
            IndexTerm::Var(v) => scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|&(_, n)| n)
                .ok_or_else(|| EvalError::Undefined(format!("unbound variable `{v}`"))),
            IndexTerm::Lit(n) => Ok(*n),
            IndexTerm::Add(l, r) => {
                let l = self.eval(l, scope)?;
                let r = self.eval(r, scope)?;
                l.checked_add(r).ok_or(EvalError::Overflow)
            }
            IndexTerm::Monus(l, r) => {
                let l = self.eval(l, scope)?;
                let r = self.eval(r, scope)?;
                Ok(l.saturating_sub(r))
            }
            IndexTerm::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval(a, scope)?);
                }
                self.apply(f, &vals)
            }
            IndexTerm::Sum {
                binder,
                bound,
                body,
            } => {
                let n = self.eval(bound, scope)?;
                let mut acc: u64 = 0;
                for i in 0..n {
                    self.tick()?;
                    scope.push((binder, i));
                    let v = self.eval(body, scope);
                    scope.pop();
                    acc = acc.checked_add(v?).ok_or(EvalError::Overflow)?;
                }
                Ok(acc)
            }
            IndexTerm::Forest {
                binder,
                start,
                count,
                body,
            } => {
                let s = self.eval(start, scope)?;
                let n = self.eval(count, scope)?;
                let mut memo = Memo::new();
                self.forest(binder, body, s, n, scope, &mut memo)
            }
        }
    }

    fn apply(&mut self, f: &str, vals: &[u64]) -> Result<u64, EvalError> {
        self.tick()?;
        let program = self.program;
        let mut binds = Vec::new();
        let rule = program.rules_for(f).find(|rule| {
            binds.clear();
            rule.args.len() == vals.len()
                && rule.args.iter().zip(vals).all(|(p, &n)| p.matches(n, &mut binds))
        });
        let Some(rule) = rule else {
            let args: Vec<String> = vals.iter().map(u64::to_string).collect();
            return Err(EvalError::Undefined(format!("{f}({})", args.join(", "))));
        };
        self.enter()?;
        let v = self.eval(&rule.rhs, &mut binds);
        self.depth -= 1;
        v
    }

    /// Node count of `count` trees numbered from `start`, following the
    /// recursion forest(s, 0) = 0 and
    /// forest(s, j+1) = forest(s, j) + 1 + forest(s + 1 + forest(s, j), body[s + forest(s, j)]).
    fn forest(
        &mut self,
        binder: &'a str,
        body: &'a IndexTerm,
        start: u64,
        count: u64,
        scope: &mut Vec<(&'a str, u64)>,
        memo: &mut Memo,
    ) -> Result<u64, EvalError> {
        if let Some(&v) = memo.get(&(start, count)) {
            return Ok(v);
        }
        self.enter()?;
        let mut seen: u64 = 0;
        for _ in 0..count {
            self.tick()?;
            let root = start.checked_add(seen).ok_or(EvalError::Overflow)?;
            scope.push((binder, root));
            let children = self.eval(body, scope);
            scope.pop();
            let children = children?;
            let sub = self.forest(binder, body, root + 1, children, scope, memo)?;
            seen = seen
                .checked_add(1)
                .and_then(|s| s.checked_add(sub))
                .ok_or(EvalError::Overflow)?;
        }
        self.depth -= 1;
        memo.insert((start, count), seen);
        Ok(seen)
    }
}
