use std::collections::BTreeSet;
use std::fmt;
use std::ops;

/// First-order index expression denoting a (possibly undefined) natural.
///
/// The builtins `0`, `1`, `+` and `∸` are represented directly: numerals
/// by [`IndexTerm::Lit`], addition and truncated subtraction by their own
/// variants. All other function symbols go through [`IndexTerm::App`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IndexTerm {
    Var(String),
    Lit(u64),
    Add(Box<IndexTerm>, Box<IndexTerm>),
    Monus(Box<IndexTerm>, Box<IndexTerm>),
    App(String, Vec<IndexTerm>),
    /// `sum(binder < bound, body)`; `binder` scopes over `body` only.
    Sum {
        binder: String,
        bound: Box<IndexTerm>,
        body: Box<IndexTerm>,
    },
    /// `forest(binder, start, count, body)`: the number of nodes of a forest
    /// of `count` trees whose nodes are numbered in pre-order from `start`,
    /// where node `n` has `body[binder := n]` children. `binder` scopes over
    /// `body` only.
    Forest {
        binder: String,
        start: Box<IndexTerm>,
        count: Box<IndexTerm>,
        body: Box<IndexTerm>,
    },
}

pub fn var(name: &str) -> IndexTerm {
    IndexTerm::Var(name.to_string())
}

pub fn lit(n: u64) -> IndexTerm {
    IndexTerm::Lit(n)
}

pub fn app(symbol: &str, args: Vec<IndexTerm>) -> IndexTerm {
    IndexTerm::App(symbol.to_string(), args)
}

pub fn sum(binder: &str, bound: IndexTerm, body: IndexTerm) -> IndexTerm {
    IndexTerm::Sum {
        binder: binder.to_string(),
        bound: Box::new(bound),
        body: Box::new(body),
    }
}

pub fn forest(binder: &str, start: IndexTerm, count: IndexTerm, body: IndexTerm) -> IndexTerm {
    IndexTerm::Forest {
        binder: binder.to_string(),
        start: Box::new(start),
        count: Box::new(count),
        body: Box::new(body),
    }
}

impl ops::Add for IndexTerm {
    type Output = IndexTerm;
    fn add(self, rhs: IndexTerm) -> IndexTerm {
        IndexTerm::Add(Box::new(self), Box::new(rhs))
    }
}

/// `-` on index terms is truncated subtraction.
impl ops::Sub for IndexTerm {
    type Output = IndexTerm;
    fn sub(self, rhs: IndexTerm) -> IndexTerm {
        IndexTerm::Monus(Box::new(self), Box::new(rhs))
    }
}

/// Picks a name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() || stem == "_" { "i" } else { stem };
    if !avoid.contains(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded supply of names")
}

impl IndexTerm {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            IndexTerm::Var(v) => {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
            IndexTerm::Lit(_) => {}
            IndexTerm::Add(l, r) | IndexTerm::Monus(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            IndexTerm::App(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            IndexTerm::Sum {
                binder,
                bound: b,
                body,
            } => {
                b.collect_free(bound, out);
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
            }
            IndexTerm::Forest {
                binder,
                start,
                count,
                body,
            } => {
                start.collect_free(bound, out);
                count.collect_free(bound, out);
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.free_vars().contains(name)
    }

    /// Function symbols applied anywhere in the term, with the arities used.
    pub fn symbols(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let IndexTerm::App(f, args) = t {
                out.push((f.clone(), args.len()));
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&IndexTerm)) {
        f(self);
        match self {
            IndexTerm::Var(_) | IndexTerm::Lit(_) => {}
            IndexTerm::Add(l, r) | IndexTerm::Monus(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            IndexTerm::App(_, args) => args.iter().for_each(|a| a.visit(f)),
            IndexTerm::Sum { bound, body, .. } => {
                bound.visit(f);
                body.visit(f);
            }
            IndexTerm::Forest {
                start, count, body, ..
            } => {
                start.visit(f);
                count.visit(f);
                body.visit(f);
            }
        }
    }

    /// Capture-avoiding substitution `self[name := with]`.
    pub fn subst(&self, name: &str, with: &IndexTerm) -> IndexTerm {
        let with_fv = with.free_vars();
        self.subst_inner(name, with, &with_fv)
    }

    fn subst_inner(&self, name: &str, with: &IndexTerm, with_fv: &BTreeSet<String>) -> IndexTerm {
        let go = |t: &IndexTerm| Box::new(t.subst_inner(name, with, with_fv));
        match self {
            IndexTerm::Var(v) if v == name => with.clone(),
            IndexTerm::Var(_) | IndexTerm::Lit(_) => self.clone(),
            IndexTerm::Add(l, r) => IndexTerm::Add(go(l), go(r)),
            IndexTerm::Monus(l, r) => IndexTerm::Monus(go(l), go(r)),
            IndexTerm::App(f, args) => IndexTerm::App(
                f.clone(),
                args.iter()
                    .map(|a| a.subst_inner(name, with, with_fv))
                    .collect(),
            ),
            IndexTerm::Sum {
                binder,
                bound,
                body,
            } => {
                let (binder, body) = subst_under(binder, body, name, with, with_fv);
                IndexTerm::Sum {
                    binder,
                    bound: go(bound),
                    body,
                }
            }
            IndexTerm::Forest {
                binder,
                start,
                count,
                body,
            } => {
                let (binder, body) = subst_under(binder, body, name, with, with_fv);
                IndexTerm::Forest {
                    binder,
                    start: go(start),
                    count: go(count),
                    body,
                }
            }
        }
    }

    /// Renames every bound variable to a depth-indexed canonical name so that
    /// alpha-equivalent terms become syntactically equal.
    pub fn canonical(&self) -> IndexTerm {
        self.canonical_at(0)
    }

    pub(crate) fn canonical_at(&self, depth: usize) -> IndexTerm {
        let go = |t: &IndexTerm| Box::new(t.canonical_at(depth));
        match self {
            IndexTerm::Var(_) | IndexTerm::Lit(_) => self.clone(),
            IndexTerm::Add(l, r) => IndexTerm::Add(go(l), go(r)),
            IndexTerm::Monus(l, r) => IndexTerm::Monus(go(l), go(r)),
            IndexTerm::App(f, args) => {
                IndexTerm::App(f.clone(), args.iter().map(|a| a.canonical_at(depth)).collect())
            }
            IndexTerm::Sum {
                binder,
                bound,
                body,
            } => {
                let canon = canonical_binder(depth);
                IndexTerm::Sum {
                    bound: go(bound),
                    body: Box::new(body.rename_free(binder, &canon).canonical_at(depth + 1)),
                    binder: canon,
                }
            }
            IndexTerm::Forest {
                binder,
                start,
                count,
                body,
            } => {
                let canon = canonical_binder(depth);
                IndexTerm::Forest {
                    start: go(start),
                    count: go(count),
                    body: Box::new(body.rename_free(binder, &canon).canonical_at(depth + 1)),
                    binder: canon,
                }
            }
        }
    }

    fn rename_free(&self, from: &str, to: &str) -> IndexTerm {
        if from == to {
            return self.clone();
        }
        self.subst(from, &IndexTerm::Var(to.to_string()))
    }

    pub fn alpha_eq(&self, other: &IndexTerm) -> bool {
        self.canonical() == other.canonical()
    }

    fn is_additive(&self) -> bool {
        matches!(self, IndexTerm::Add(..) | IndexTerm::Monus(..))
    }
}

/// Canonical binder names start with `%`, which no parsed identifier can.
pub(crate) fn canonical_binder(depth: usize) -> String {
    format!("%{depth}")
}

fn subst_under(
    binder: &str,
    body: &IndexTerm,
    name: &str,
    with: &IndexTerm,
    with_fv: &BTreeSet<String>,
) -> (String, Box<IndexTerm>) {
    if binder == name {
        return (binder.to_string(), Box::new(body.clone()));
    }
    if with_fv.contains(binder) {
        let mut avoid = with_fv.clone();
        avoid.extend(body.free_vars());
        avoid.insert(name.to_string());
        let fresh = fresh_name(binder, &avoid);
        let renamed = body.subst(binder, &IndexTerm::Var(fresh.clone()));
        return (fresh, Box::new(renamed.subst_inner(name, with, with_fv)));
    }
    (binder.to_string(), Box::new(body.subst_inner(name, with, with_fv)))
}

impl fmt::Display for IndexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexTerm::Var(v) => f.write_str(v),
            IndexTerm::Lit(n) => write!(f, "{n}"),
            IndexTerm::Add(l, r) | IndexTerm::Monus(l, r) => {
                let op = if matches!(self, IndexTerm::Add(..)) { "+" } else { "-" };
                write!(f, "{l} {op} ")?;
                if r.is_additive() {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            IndexTerm::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            IndexTerm::Sum {
                binder,
                bound,
                body,
            } => write!(f, "sum({binder} < {bound}, {body})"),
            IndexTerm::Forest {
                binder,
                start,
                count,
                body,
            } => write!(f, "forest({binder}, {start}, {count}, {body})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_avoids_capture() {
        // sum(b < 3, a + b)[a := b] must not capture the free b.
        let t = sum("b", lit(3), var("a") + var("b"));
        let s = t.subst("a", &var("b"));
        let IndexTerm::Sum { binder, body, .. } = &s else {
            panic!()
        };
        assert_ne!(binder, "b");
        assert_eq!(**body, var("b") + var(binder));
        assert_eq!(s.free_vars(), BTreeSet::from(["b".to_string()]));
    }

    #[test]
    fn forest_binder_scopes_only_the_body() {
        let t = forest("b", var("b") + lit(1), var("a"), app("gt", vec![var("x"), var("b")]));
        let fv = t.free_vars();
        assert!(fv.contains("b") && fv.contains("a") && fv.contains("x"));
        let s = t.subst("b", &lit(4));
        assert_eq!(
            s,
            forest("b", lit(4) + lit(1), var("a"), app("gt", vec![var("x"), var("b")]))
        );
    }

    #[test]
    fn alpha_equivalence() {
        let l = sum("a", var("n"), var("a") + lit(1));
        let r = sum("z", var("n"), var("z") + lit(1));
        assert!(l.alpha_eq(&r));
        assert!(!l.alpha_eq(&sum("z", var("n"), var("n") + lit(1))));
    }

    #[test]
    fn display_parenthesizes_right_operands() {
        let t = var("a") - (var("b") + lit(1));
        assert_eq!(t.to_string(), "a - (b + 1)");
        assert_eq!((var("a") - var("b") - lit(1)).to_string(), "a - b - 1");
    }

    #[test]
    fn fresh_names_skip_taken_ones() {
        let avoid: BTreeSet<String> = ["a", "a1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("a", &avoid), "a2");
        assert_eq!(fresh_name("_", &BTreeSet::new()), "i");
    }
}
