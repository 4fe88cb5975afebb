//! Bounded semantic entailment `φ; Φ ⊨ goal`.
//!
//! The relation is semi-decided by enumerating every assignment of the
//! variables in `φ` to `0..=bound`. The outcome is three-valued: a
//! counterexample refutes the goal outright, while a `Verified` verdict only
//! holds up to the bound it carries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::eval::{EvalError, Evaluator};
use super::program::EquationalProgram;
use super::term::IndexTerm;

pub const DEFAULT_BOUND: u64 = 8;
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Values for index variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(BTreeMap<String, u64>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'s>(pairs: impl IntoIterator<Item = (&'s str, u64)>) -> Self {
        Assignment(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn get(&self, var: &str) -> Option<u64> {
        self.0.get(var).copied()
    }

    pub fn insert(&mut self, var: &str, value: u64) {
        self.0.insert(var.to_string(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, u64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Le,
    Lt,
    Eq,
    /// Kleene equality: both sides undefined, or both defined and equal.
    Kleene,
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Kleene => "~=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub lhs: IndexTerm,
    pub rel: Rel,
    pub rhs: IndexTerm,
}

impl Constraint {
    pub fn new(lhs: IndexTerm, rel: Rel, rhs: IndexTerm) -> Self {
        Constraint { lhs, rel, rhs }
    }

    pub fn le(lhs: IndexTerm, rhs: IndexTerm) -> Self {
        Self::new(lhs, Rel::Le, rhs)
    }

    pub fn lt(lhs: IndexTerm, rhs: IndexTerm) -> Self {
        Self::new(lhs, Rel::Lt, rhs)
    }

    pub fn eq(lhs: IndexTerm, rhs: IndexTerm) -> Self {
        Self::new(lhs, Rel::Eq, rhs)
    }

    pub fn subst(&self, var: &str, with: &IndexTerm) -> Self {
        Constraint::new(self.lhs.subst(var, with), self.rel, self.rhs.subst(var, with))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut fv = self.lhs.free_vars();
        fv.extend(self.rhs.free_vars());
        fv
    }

    pub fn canonical(&self) -> Self {
        Constraint::new(self.lhs.canonical(), self.rel, self.rhs.canonical())
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

/// Declared variables `φ` together with the hypotheses `Φ`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub vars: Vec<String>,
    pub constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vars<'s>(vars: impl IntoIterator<Item = &'s str>) -> Self {
        ConstraintSet {
            vars: vars.into_iter().map(str::to_string).collect(),
            constraints: Vec::new(),
        }
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.vars.iter().any(|w| w == v)
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.vars.iter().cloned().collect()
    }

    /// `φ, var; Φ, hyp`.
    pub fn extend(&self, var: &str, hyp: Constraint) -> Self {
        let mut out = self.clone();
        if !out.has_var(var) {
            out.vars.push(var.to_string());
        }
        out.constraints.push(hyp);
        out
    }

    pub fn assume(&self, hyp: Constraint) -> Self {
        let mut out = self.clone();
        out.constraints.push(hyp);
        out
    }

    /// Same variables and the same hypotheses up to order and alpha-renaming.
    pub fn same_as(&self, other: &ConstraintSet) -> bool {
        let canon = |c: &ConstraintSet| -> BTreeSet<String> {
            c.constraints.iter().map(|k| k.canonical().to_string()).collect()
        };
        self.var_set() == other.var_set() && canon(self) == canon(other)
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = if self.vars.is_empty() {
            "∅".to_string()
        } else {
            self.vars.join(",")
        };
        let hyps = if self.constraints.is_empty() {
            "∅".to_string()
        } else {
            self.constraints
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "{vars}; {hyps}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    Holds(Constraint),
    /// `↓I`: the term is defined.
    Defined(IndexTerm),
}

impl Goal {
    pub fn le(lhs: IndexTerm, rhs: IndexTerm) -> Self {
        Goal::Holds(Constraint::le(lhs, rhs))
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Holds(c) => write!(f, "{c}"),
            Goal::Defined(t) => write!(f, "↓{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownReason {
    FuelExhausted(Assignment),
    Overflow(Assignment),
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::FuelExhausted(a) => write!(f, "fuel exhausted at {a}"),
            UnknownReason::Overflow(a) => write!(f, "arithmetic overflow at {a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The goal held at every satisfying assignment with values `<= bound`.
    Verified { bound: u64 },
    /// A satisfying assignment at which the goal is false.
    Refuted { witness: Assignment },
    Unknown { reason: UnknownReason },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    /// Conjunction: Refuted dominates Unknown, which dominates Verified.
    /// Among equals the left operand wins.
    pub fn and(self, other: Verdict) -> Verdict {
        match (&self, &other) {
            (Verdict::Refuted { .. }, _) => self,
            (_, Verdict::Refuted { .. }) => other,
            (Verdict::Unknown { .. }, _) => self,
            (_, Verdict::Unknown { .. }) => other,
            (Verdict::Verified { bound: a }, Verdict::Verified { bound: b }) => {
                Verdict::Verified { bound: *a.min(b) }
            }
        }
    }

    pub fn all(bound: u64, verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut acc = Verdict::Verified { bound };
        for v in verdicts {
            acc = acc.and(v);
            if acc.is_refuted() {
                break;
            }
        }
        acc
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified { bound } => write!(f, "verified up to bound {bound}"),
            Verdict::Refuted { witness } => write!(f, "refuted at {witness}"),
            Verdict::Unknown { reason } => write!(f, "unknown ({reason})"),
        }
    }
}

/// The equational program together with the search limits used to discharge
/// semantic side conditions.
#[derive(Debug, Clone, Copy)]
pub struct Oracle<'p> {
    pub program: &'p EquationalProgram,
    pub bound: u64,
    pub fuel: u64,
}

enum Truth {
    True,
    False,
    Unknown(fn(Assignment) -> UnknownReason),
}

impl<'p> Oracle<'p> {
    pub fn new(program: &'p EquationalProgram, bound: u64, fuel: u64) -> Self {
        Oracle {
            program,
            bound,
            fuel,
        }
    }

    pub fn with_defaults(program: &'p EquationalProgram) -> Self {
        Self::new(program, DEFAULT_BOUND, DEFAULT_FUEL)
    }

    pub fn verified(&self) -> Verdict {
        Verdict::Verified { bound: self.bound }
    }

    /// Bounded check of `ctx ⊨ goal`.
    pub fn entails(&self, ctx: &ConstraintSet, goal: &Goal) -> Verdict {
        let n = ctx.vars.len();
        let mut values = vec![0u64; n];
        let mut unknown = None;
        loop {
            let scope: Vec<(&str, u64)> = ctx
                .vars
                .iter()
                .map(String::as_str)
                .zip(values.iter().copied())
                .collect();
            let satisfied = ctx
                .constraints
                .iter()
                .all(|c| matches!(self.truth(&Goal::Holds(c.clone()), &scope), Truth::True));
            if satisfied {
                match self.truth(goal, &scope) {
                    Truth::True => {}
                    Truth::False => {
                        return Verdict::Refuted {
                            witness: Assignment::from_pairs(scope),
                        }
                    }
                    Truth::Unknown(reason) => {
                        if unknown.is_none() {
                            unknown = Some(reason(Assignment::from_pairs(scope)));
                        }
                    }
                }
            }
            // odometer over 0..=bound
            let mut i = 0;
            loop {
                if i == n {
                    return match unknown {
                        Some(reason) => Verdict::Unknown { reason },
                        None => self.verified(),
                    };
                }
                if values[i] < self.bound {
                    values[i] += 1;
                    break;
                }
                values[i] = 0;
                i += 1;
            }
        }
    }

    fn eval<'t>(&self, t: &'t IndexTerm, scope: &[(&'t str, u64)]) -> Result<u64, EvalError>
    where
        'p: 't,
    {
        let mut scope = scope.to_vec();
        Evaluator::new(self.program, self.fuel).eval(t, &mut scope)
    }

    fn truth(&self, goal: &Goal, scope: &[(&str, u64)]) -> Truth {
        let unknown = |e: &EvalError| match e {
            EvalError::FuelExhausted => Some(Truth::Unknown(UnknownReason::FuelExhausted)),
            EvalError::Overflow => Some(Truth::Unknown(UnknownReason::Overflow)),
            EvalError::Undefined(_) => None,
        };
        match goal {
            Goal::Defined(t) => match self.eval(t, scope) {
                Ok(_) => Truth::True,
                Err(e) => unknown(&e).unwrap_or(Truth::False),
            },
            Goal::Holds(c) => {
                let l = self.eval(&c.lhs, scope);
                let r = self.eval(&c.rhs, scope);
                for side in [&l, &r] {
                    if let Err(e) = side {
                        if let Some(u) = unknown(e) {
                            return u;
                        }
                    }
                }
                let holds = match (c.rel, l, r) {
                    (Rel::Kleene, Err(_), Err(_)) => true,
                    (_, Err(_), _) | (_, _, Err(_)) => false,
                    (Rel::Le, Ok(l), Ok(r)) => l <= r,
                    (Rel::Lt, Ok(l), Ok(r)) => l < r,
                    (Rel::Eq | Rel::Kleene, Ok(l), Ok(r)) => l == r,
                };
                if holds {
                    Truth::True
                } else {
                    Truth::False
                }
            }
        }
    }

    /// Value of a closed (or fully assigned) term.
    pub fn eval_under(&self, t: &IndexTerm, rho: &Assignment) -> Result<u64, EvalError> {
        super::eval::eval_index(t, rho, self.program, self.fuel)
    }
}

/// Free-function form of [`Oracle::entails`].
pub fn entails(
    ctx: &ConstraintSet,
    goal: &Goal,
    program: &EquationalProgram,
    bound: u64,
    fuel: u64,
) -> Verdict {
    Oracle::new(program, bound, fuel).entails(ctx, goal)
}
