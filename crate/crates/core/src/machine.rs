//! The cost-counting Krivine machine for PCF.
//!
//! Configurations are `(focus, environment, stack)`. Environments and stacks
//! are persistent linked lists, so capturing a closure costs O(1) and old
//! configurations stay valid after stepping. Every term stored in a closure is
//! a subterm of the loaded program and is held by reference.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use thiserror::Error;

use crate::pcf::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("the machine only runs closed terms")]
    ClosedTermRequired,
    #[error("stuck configuration: {0}")]
    Stuck(String),
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: u64 },
    #[error("numeral overflow")]
    Overflow,
    #[error("step {step}: a term of size {found} was recorded, but the program has size {bound}")]
    SubtermSizeViolation { step: u64, found: u64, bound: u64 },
    #[error("trace output failed: {0}")]
    Trace(String),
}

#[derive(Debug, Clone)]
pub struct Closure<'t> {
    pub term: &'t Term,
    pub env: Env<'t>,
}

struct EnvNode<'t> {
    head: Closure<'t>,
    rest: Env<'t>,
    len: usize,
}

/// A sequence of closures; index 0 is the most recently pushed.
#[derive(Clone, Default)]
pub struct Env<'t>(Option<Arc<EnvNode<'t>>>);

impl<'t> Env<'t> {
    pub fn empty() -> Self {
        Env(None)
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, head: Closure<'t>) -> Self {
        Env(Some(Arc::new(EnvNode {
            head,
            rest: self.clone(),
            len: self.len() + 1,
        })))
    }

    pub fn get(&self, mut i: usize) -> Option<&Closure<'t>> {
        let mut cur = self.0.as_deref();
        while let Some(node) = cur {
            if i == 0 {
                return Some(&node.head);
            }
            i -= 1;
            cur = node.rest.0.as_deref();
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = &Closure<'t>> {
        let mut cur = self.0.as_deref();
        std::iter::from_fn(move || {
            let node = cur?;
            cur = node.rest.0.as_deref();
            Some(&node.head)
        })
    }
}

// Long runs build long chains; dropping them recursively would overflow.
impl Drop for Env<'_> {
    fn drop(&mut self) {
        let mut work: Vec<Arc<EnvNode<'_>>> = self.0.take().into_iter().collect();
        while let Some(node) = work.pop() {
            if let Ok(mut node) = Arc::try_unwrap(node) {
                work.extend(node.rest.0.take());
                work.extend(node.head.env.0.take());
            }
        }
    }
}

impl fmt::Debug for Env<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter().map(|c| c.term.to_string())).finish()
    }
}

#[derive(Debug, Clone)]
pub enum StackItem<'t> {
    Arg(Closure<'t>),
    S,
    P,
    Branches {
        zero: &'t Term,
        succ: &'t Term,
        env: Env<'t>,
    },
}

impl StackItem<'_> {
    pub fn size(&self) -> u64 {
        match self {
            StackItem::Arg(c) => c.term.size(),
            StackItem::S | StackItem::P => 1,
            StackItem::Branches { zero, succ, .. } => zero.size() + succ.size(),
        }
    }
}

struct StackNode<'t> {
    item: StackItem<'t>,
    rest: Stack<'t>,
    size: u64,
    depth: usize,
}

/// A persistent stack that caches its total size.
#[derive(Clone, Default)]
pub struct Stack<'t>(Option<Arc<StackNode<'t>>>);

impl<'t> Stack<'t> {
    pub fn empty() -> Self {
        Stack(None)
    }

    pub fn size(&self) -> u64 {
        self.0.as_ref().map_or(0, |n| n.size)
    }

    pub fn depth(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.depth)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, item: StackItem<'t>) -> Self {
        Stack(Some(Arc::new(StackNode {
            size: self.size() + item.size(),
            depth: self.depth() + 1,
            item,
            rest: self.clone(),
        })))
    }

    pub fn pop(&self) -> Option<(&StackItem<'t>, &Stack<'t>)> {
        self.0.as_deref().map(|n| (&n.item, &n.rest))
    }

    pub fn iter(&self) -> impl Iterator<Item = &StackItem<'t>> {
        let mut cur = self.0.as_deref();
        std::iter::from_fn(move || {
            let node = cur?;
            cur = node.rest.0.as_deref();
            Some(&node.item)
        })
    }
}

impl Drop for Stack<'_> {
    fn drop(&mut self) {
        let mut work: Vec<Arc<StackNode<'_>>> = self.0.take().into_iter().collect();
        while let Some(node) = work.pop() {
            if let Ok(mut node) = Arc::try_unwrap(node) {
                work.extend(node.rest.0.take());
            }
        }
    }
}

impl fmt::Debug for Stack<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// What the machine is looking at: a program subterm, or a numeral the
/// machine computed itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Focus<'t> {
    Term(&'t Term),
    Num(u64),
}

impl Focus<'_> {
    pub fn size(&self) -> u64 {
        match self {
            Focus::Term(t) => t.size(),
            Focus::Num(_) => 1,
        }
    }

    fn numeral(&self) -> Option<u64> {
        match *self {
            Focus::Term(&Term::Const(n)) | Focus::Num(n) => Some(n),
            _ => None,
        }
    }

    pub fn head(&self) -> String {
        match self {
            Focus::Term(Term::Const(n)) | Focus::Num(n) => n.to_string(),
            Focus::Term(t) => t.head().to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Configuration<'t> {
    pub focus: Focus<'t>,
    pub env: Env<'t>,
    pub stack: Stack<'t>,
    pub steps: u64,
}

impl Configuration<'_> {
    /// `|(t, ρ, ξ)| = |t| + |ξ|`.
    pub fn size(&self) -> u64 {
        self.focus.size() + self.stack.size()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    App,
    Lam,
    Var,
    IfZ,
    Fix,
    NumS,
    NumP,
    NumIfZero,
    NumIfSucc,
    Succ,
    Pred,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::App => "app",
            Rule::Lam => "lam",
            Rule::Var => "var",
            Rule::IfZ => "ifz",
            Rule::Fix => "fix",
            Rule::NumS => "num-s",
            Rule::NumP => "num-p",
            Rule::NumIfZero => "num-ifz0",
            Rule::NumIfSucc => "num-ifzS",
            Rule::Succ => "succ",
            Rule::Pred => "pred",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone)]
pub enum Transition<'t> {
    Next(Rule, Configuration<'t>),
    Final(u64),
}

pub fn load(t: &Term) -> Result<Configuration<'_>, MachineError> {
    if !t.is_closed() {
        return Err(MachineError::ClosedTermRequired);
    }
    Ok(Configuration {
        focus: Focus::Term(t),
        env: Env::empty(),
        stack: Stack::empty(),
        steps: 0,
    })
}

/// One transition. `Final(n)` when the focus is a numeral and the stack is
/// empty.
pub fn machine_step<'t>(c: &Configuration<'t>) -> Result<Transition<'t>, MachineError> {
    let next = |rule, focus, env, stack| {
        Ok(Transition::Next(
            rule,
            Configuration {
                focus,
                env,
                stack,
                steps: c.steps + 1,
            },
        ))
    };
    let stuck = || Err(MachineError::Stuck(format!("{} with stack {:?}", c.focus.head(), c.stack)));
    if let Some(n) = c.focus.numeral() {
        let Some((top, rest)) = c.stack.pop() else {
            return Ok(Transition::Final(n));
        };
        return match top {
            StackItem::S => {
                let m = n.checked_add(1).ok_or(MachineError::Overflow)?;
                next(Rule::NumS, Focus::Num(m), c.env.clone(), rest.clone())
            }
            StackItem::P => next(Rule::NumP, Focus::Num(n.saturating_sub(1)), c.env.clone(), rest.clone()),
            StackItem::Branches { zero, succ, env } if n == 0 => {
                next(Rule::NumIfZero, Focus::Term(zero), env.clone(), rest.clone())
            }
            StackItem::Branches { succ, env, .. } => {
                next(Rule::NumIfSucc, Focus::Term(succ), env.clone(), rest.clone())
            }
            StackItem::Arg(_) => stuck(),
        };
    }
    let Focus::Term(t) = c.focus else {
        unreachable!("computed numerals are handled above")
    };
    match t {
        Term::App(f, a) => {
            let arg = StackItem::Arg(Closure {
                term: a,
                env: c.env.clone(),
            });
            next(Rule::App, Focus::Term(f), c.env.clone(), c.stack.push(arg))
        }
        Term::Lam(_, body) => match c.stack.pop() {
            Some((StackItem::Arg(cl), rest)) => {
                next(Rule::Lam, Focus::Term(body), c.env.push(cl.clone()), rest.clone())
            }
            _ => stuck(),
        },
        Term::Var(i) => match c.env.get(*i) {
            Some(cl) => next(Rule::Var, Focus::Term(cl.term), cl.env.clone(), c.stack.clone()),
            None => stuck(),
        },
        Term::IfZ(s, z, n) => {
            let br = StackItem::Branches {
                zero: z,
                succ: n,
                env: c.env.clone(),
            };
            next(Rule::IfZ, Focus::Term(s), c.env.clone(), c.stack.push(br))
        }
        Term::Fix(_, body) => {
            let me = Closure {
                term: t,
                env: c.env.clone(),
            };
            next(Rule::Fix, Focus::Term(body), c.env.push(me), c.stack.clone())
        }
        Term::Succ(u) => next(Rule::Succ, Focus::Term(u), c.env.clone(), c.stack.push(StackItem::S)),
        Term::Pred(u) => next(Rule::Pred, Focus::Term(u), c.env.clone(), c.stack.push(StackItem::P)),
        Term::Const(_) => unreachable!("numerals are handled above"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunResult {
    pub value: u64,
    pub steps: u64,
    pub max_config_size: u64,
}

pub struct RunOptions<'w> {
    /// Check after every step that every term recorded in the environment or
    /// on the stack is no larger than the program. On by default in debug
    /// builds.
    pub check_subterm_sizes: bool,
    /// One line per step: `step#  rule-tag  |C|  term-head`, tab separated.
    pub trace: Option<&'w mut dyn Write>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        RunOptions {
            check_subterm_sizes: cfg!(debug_assertions),
            trace: None,
        }
    }
}

impl<'w> RunOptions<'w> {
    pub fn checked() -> Self {
        RunOptions {
            check_subterm_sizes: true,
            trace: None,
        }
    }
}

/// Largest term recorded anywhere in the environment or stack, following
/// closures into their own environments.
pub fn largest_recorded(c: &Configuration<'_>) -> u64 {
    let mut seen: HashSet<*const EnvNode<'_>> = HashSet::new();
    let mut envs: Vec<&Env<'_>> = vec![&c.env];
    let mut best = 0;
    for item in c.stack.iter() {
        match item {
            StackItem::Arg(cl) => {
                best = best.max(cl.term.size());
                envs.push(&cl.env);
            }
            StackItem::Branches { zero, succ, env } => {
                best = best.max(zero.size()).max(succ.size());
                envs.push(env);
            }
            StackItem::S | StackItem::P => {}
        }
    }
    while let Some(env) = envs.pop() {
        let mut cur = env.0.as_deref();
        while let Some(node) = cur {
            if !seen.insert(node as *const _) {
                break;
            }
            best = best.max(node.head.term.size());
            envs.push(&node.head.env);
            cur = node.rest.0.as_deref();
        }
    }
    best
}

pub fn run(t: &Term, fuel: u64) -> Result<RunResult, MachineError> {
    run_with(t, fuel, RunOptions::default())
}

pub fn run_with(t: &Term, fuel: u64, mut opts: RunOptions<'_>) -> Result<RunResult, MachineError> {
    let bound = t.size();
    let mut c = load(t)?;
    let mut max_config_size = c.size();
    loop {
        match machine_step(&c)? {
            Transition::Final(value) => {
                return Ok(RunResult {
                    value,
                    steps: c.steps,
                    max_config_size,
                })
            }
            Transition::Next(rule, next) => {
                if c.steps == fuel {
                    return Err(MachineError::FuelExhausted { steps: c.steps });
                }
                c = next;
                max_config_size = max_config_size.max(c.size());
                if let Some(w) = opts.trace.as_mut() {
                    writeln!(w, "{}\t{}\t{}\t{}", c.steps, rule, c.size(), c.focus.head())
                        .map_err(|e| MachineError::Trace(e.to_string()))?;
                }
                if opts.check_subterm_sizes {
                    let found = largest_recorded(&c);
                    if found > bound {
                        return Err(MachineError::SubtermSizeViolation {
                            step: c.steps,
                            found,
                            bound,
                        });
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::parse;

    const DBL: &str = "fix f. \\x. ifz x then 0 else s(s(f (p x)))";
    const OMEGA: &str = "fix f. \\x. ifz x then 0 else s(s(f x))";

    fn rules(src: &str) -> Vec<&'static str> {
        let t = parse(src).unwrap();
        let mut c = load(&t).unwrap();
        let mut out = Vec::new();
        while let Transition::Next(r, d) = machine_step(&c).unwrap() {
            out.push(r.tag());
            c = d;
        }
        out
    }

    #[test]
    fn loading() {
        let t = Term::Const(0);
        let c = load(&t).unwrap();
        assert!(c.env.is_empty() && c.stack.is_empty());
        assert_eq!(c.steps, 0);
        assert_eq!(load(&Term::Var(0)).unwrap_err(), MachineError::ClosedTermRequired);
    }

    #[test]
    fn small_traces() {
        assert_eq!(rules("s 0"), ["succ", "num-s"]);
        assert_eq!(rules("(\\x. x) 0"), ["app", "lam", "var"]);
        assert_eq!(rules("ifz 0 then 1 else 2"), ["ifz", "num-ifz0"]);
        assert_eq!(rules("ifz p 3 then 1 else 2"), ["ifz", "pred", "num-p", "num-ifzS"]);
    }

    #[test]
    fn zero_with_branches_resumes_the_saved_environment() {
        let z = Term::Const(7);
        let n = Term::Const(8);
        let saved = Env::empty().push(Closure {
            term: &z,
            env: Env::empty(),
        });
        let c = Configuration {
            focus: Focus::Num(0),
            env: Env::empty(),
            stack: Stack::empty().push(StackItem::Branches {
                zero: &z,
                succ: &n,
                env: saved,
            }),
            steps: 0,
        };
        let Transition::Next(Rule::NumIfZero, d) = machine_step(&c).unwrap() else {
            panic!()
        };
        assert_eq!(d.focus, Focus::Term(&z));
        assert_eq!(d.env.len(), 1);
        assert!(d.stack.is_empty());
    }

    #[test]
    fn runs() {
        assert_eq!(
            run(&Term::Const(5), 10),
            Ok(RunResult {
                value: 5,
                steps: 0,
                max_config_size: 1
            })
        );
        assert_eq!(run(&parse("s 0").unwrap(), 10).unwrap().steps, 2);
        let dbl = parse(DBL).unwrap();
        let r0 = run(&dbl.clone().apply_nat(0), 10_000).unwrap();
        let r3 = run(&dbl.apply_nat(3), 10_000).unwrap();
        assert_eq!((r0.value, r3.value), (0, 6));
        assert!(r0.steps < r3.steps);
    }

    #[test]
    fn omega_diverges_on_positive_input() {
        let omega = parse(OMEGA).unwrap();
        assert_eq!(run(&omega.clone().apply_nat(0), 1000).unwrap().value, 0);
        assert_eq!(
            run(&omega.apply_nat(1), 200_000),
            Err(MachineError::FuelExhausted { steps: 200_000 })
        );
    }

    #[test]
    fn recorded_terms_are_program_subterms() {
        let t = parse(DBL).unwrap().apply_nat(4);
        assert!(run_with(&t, 10_000, RunOptions::checked()).is_ok());
    }

    #[test]
    fn trace_lines() {
        let t = parse("s 0").unwrap();
        let mut out = Vec::new();
        run_with(
            &t,
            10,
            RunOptions {
                check_subterm_sizes: false,
                trace: Some(&mut out),
            },
        )
        .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1\tsucc\t2\t0\n2\tnum-s\t1\t1\n");
    }

    #[test]
    fn fuel_exactly_enough() {
        let t = parse("s 0").unwrap();
        assert!(run(&t, 2).is_ok());
        assert_eq!(run(&t, 1), Err(MachineError::FuelExhausted { steps: 1 }));
    }
}
