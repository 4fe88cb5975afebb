//! Branching tables and a direct pre-order walk of the forests they
//! describe.

use dlpcf::index::{
    app, entails, eval_index, forest, lit, sum, var, Constraint, ConstraintSet, EquationalProgram, EvalError, Goal, IndexTerm,
};

/// A branching table `h(0), ..., h(n-1)`. Past the end `h` is 0 when the
/// table is total and undefined otherwise.
#[derive(Debug, Clone)]
pub struct Table {
    pub children: Vec<u64>,
    pub total: bool,
}

impl Table {
    pub fn get(&self, label: u64) -> Option<u64> {
        match self.children.get(label as usize) {
            Some(&c) => Some(c),
            None if self.total => Some(0),
            None => None,
        }
    }

    pub fn program(&self) -> EquationalProgram {
        let mut src = String::from("symbol h/1\n");
        for (k, c) in self.children.iter().enumerate() {
            src.push_str(&format!("h({k}) = {c}\n"));
        }
        if self.total {
            src.push_str(&format!("h(n + {}) = 0\n", self.children.len()));
        }
        EquationalProgram::parse(&src).unwrap()
    }
}

/// Nodes in a forest of `count` trees whose node labelled `n` has
/// `children(n)` children, labels assigned in pre-order from `start`.
pub fn walk(start: u64, count: u64, children: &dyn Fn(u64) -> Option<u64>) -> Option<u64> {
    fn visit(next: &mut u64, children: &dyn Fn(u64) -> Option<u64>) -> Option<()> {
        let me = *next;
        *next += 1;
        for _ in 0..children(me)? {
            visit(next, children)?;
        }
        Some(())
    }
    let mut next = start;
    for _ in 0..count {
        visit(&mut next, children)?;
    }
    Some(next - start)
}

/// The two-tree forest: node `n` has `kstar(n)` children.
pub fn kstar() -> Table {
    Table {
        children: vec![1, 3, 2, 0, 0, 0, 1, 0, 2, 1, 0, 1, 0],
        total: true,
    }
}

fn h(arg: IndexTerm) -> IndexTerm {
    app("h", vec![arg])
}

/// `Some(n)` for a value, `None` for undefined. Fuel never runs out on
/// these small forests.
pub fn value(t: &IndexTerm, e: &EquationalProgram) -> Result<Option<u64>, String> {
    match eval_index(t, &Default::default(), e, 100_000) {
        Ok(n) => Ok(Some(n)),
        Err(EvalError::Undefined(_)) => Ok(None),
        Err(other) => Err(format!("{t}: {other}")),
    }
}

/// Kleene equality through the entailment oracle at bound 8: both sides
/// defined and equal, or neither defined.
pub fn kleene_equal(l: &IndexTerm, r: &IndexTerm, e: &EquationalProgram) -> bool {
    let ctx = ConstraintSet::new();
    let defined = |t: &IndexTerm| entails(&ctx, &Goal::Defined(t.clone()), e, 8, 100_000).is_verified();
    match (defined(l), defined(r)) {
        (true, true) => entails(&ctx, &Goal::Holds(Constraint::eq(l.clone(), r.clone())), e, 8, 100_000).is_verified(),
        (false, false) => true,
        _ => false,
    }
}

fn agree(left: &IndexTerm, right: &IndexTerm, expected: Option<u64>, e: &EquationalProgram) -> Result<(), String> {
    let (l, r) = (value(left, e)?, value(right, e)?);
    if l != expected || r != expected {
        return Err(format!("{left} = {l:?}, {right} = {r:?}, the walk gives {expected:?}"));
    }
    if !kleene_equal(left, right, e) {
        return Err(format!("{left} ≄ {right}"));
    }
    Ok(())
}

/// △_a(I+J, K, H) ≃ △_a(J, K, H[a:=a+I]) with `H = h(a)`.
pub fn shifted_forest_instance(table: &Table, i: u64, j: u64, k: u64) -> Result<(), String> {
    let e = table.program();
    let body = h(var("a"));
    let left = forest("a", lit(i) + lit(j), lit(k), body.clone());
    let right = forest("a", lit(j), lit(k), body.subst("a", &(var("a") + lit(i))));
    let expected = walk(i + j, k, &|n| table.get(n));
    let shifted = walk(j, k, &|n| table.get(n + i));
    if shifted != expected {
        return Err(format!("the walks disagree: {shifted:?} vs {expected:?}"));
    }
    agree(&left, &right, expected, &e)
}

/// △_a(1, J, I) ≃ Σ_{b<J} △_a(0, 1, I[a := a+1+△_a(1,b,I)]) with `I = h(a)`.
pub fn forest_as_sum_instance(table: &Table, j: u64) -> Result<(), String> {
    let e = table.program();
    let body = h(var("a"));
    let left = forest("a", lit(1), lit(j), body.clone());
    let shift = var("a") + lit(1) + forest("a", lit(1), var("b"), body.clone());
    let right = sum("b", lit(j), forest("a", lit(0), lit(1), body.subst("a", &shift)));
    let expected = walk(1, j, &|n| table.get(n));
    let by_trees: Option<u64> = (0..j)
        .map(|b| {
            let offset = walk(1, b, &|n| table.get(n))?;
            walk(0, 1, &|n| table.get(n + 1 + offset))
        })
        .sum();
    if by_trees != expected {
        return Err(format!("the walks disagree: {by_trees:?} vs {expected:?}"));
    }
    agree(&left, &right, expected, &e)
}
