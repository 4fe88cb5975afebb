//! Random types for the subtyping suites.
//!
//! Types are drawn over `x, y, b` with `Φ = {x ≤ y}` and a partial symbol
//! `half`, so that well-definedness actually filters.

use dlpcf::index::{app, lit, sum, var, Constraint, ConstraintSet, EquationalProgram, IndexTerm, Oracle, Verdict};
use dlpcf::types::{arrow, modal, nat, subtype, well_defined, BasicType, ModalType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BOUND: u64 = 6;
pub const TYPES: usize = 500;

pub fn program() -> EquationalProgram {
    EquationalProgram::parse("half(0) = 0\nhalf(n + 2) = half(n) + 1\n").unwrap()
}

pub fn context() -> ConstraintSet {
    ConstraintSet::with_vars(["x", "y", "b"]).assume(Constraint::le(var("x"), var("y")))
}

pub struct Gen(pub ChaCha8Rng);

impl Gen {
    pub fn term(&mut self, depth: u32) -> IndexTerm {
        let leaf = depth == 0 || self.0.random_bool(0.4);
        if leaf {
            return match self.0.random_range(0..4) {
                0 => lit(self.0.random_range(0..4)),
                1 => var("x"),
                2 => var("y"),
                _ => var("b"),
            };
        }
        match self.0.random_range(0..5) {
            0 | 1 => self.term(depth - 1) + self.term(depth - 1),
            2 => self.term(depth - 1) - self.term(depth - 1),
            3 => app("half", vec![self.term(depth - 1)]),
            _ => sum("c", lit(self.0.random_range(0..3)), self.term(depth - 1)),
        }
    }

    pub fn basic(&mut self, depth: u32) -> BasicType {
        if depth == 0 || self.0.random_bool(0.55) {
            nat(self.term(2), self.term(2))
        } else {
            arrow(self.modal(depth - 1), self.basic(depth - 1))
        }
    }

    pub fn modal(&mut self, depth: u32) -> ModalType {
        modal("b", self.term(1), self.basic(depth))
    }

    pub fn slack(&mut self) -> IndexTerm {
        lit(self.0.random_range(0..3))
    }

    /// A supertype (`up`) or subtype (`!up`) of `t`, built by moving each
    /// bound in the direction its variance allows.
    pub fn shift(&mut self, t: &BasicType, up: bool) -> BasicType {
        match t {
            BasicType::Nat(i, j) if up => nat(i.clone() - self.slack(), j.clone() + self.slack()),
            BasicType::Nat(i, j) => nat(i.clone() + self.slack(), j.clone() - self.slack()),
            BasicType::Arrow(a, s) => arrow(self.shift_modal(a, !up), self.shift(s, up)),
        }
    }

    pub fn shift_modal(&mut self, m: &ModalType, up: bool) -> ModalType {
        let bound = if up {
            m.bound.clone() - self.slack()
        } else {
            m.bound.clone() + self.slack()
        };
        modal(&m.binder, bound, self.shift(&m.body, up))
    }

    /// A random type with the same erasure as `t`.
    pub fn same_shape(&mut self, t: &BasicType) -> BasicType {
        match t {
            BasicType::Nat(..) => nat(self.term(2), self.term(2)),
            BasicType::Arrow(a, s) => arrow(modal("b", self.term(1), self.same_shape(&a.body)), self.same_shape(s)),
        }
    }
}

pub fn well_defined_types(seed: u64, count: usize, oracle: &Oracle<'_>) -> Vec<BasicType> {
    let mut g = Gen(ChaCha8Rng::seed_from_u64(seed));
    let ctx = context();
    let mut out = Vec::new();
    let mut drawn = 0;
    while out.len() < count {
        drawn += 1;
        assert!(drawn < 50 * count, "the generator rarely produces well-defined types");
        let t = g.basic(3);
        if well_defined(&ctx, t.clone(), oracle).is_verified() {
            out.push(t);
        }
    }
    out
}

pub fn sub(s: &BasicType, t: &BasicType, oracle: &Oracle<'_>, precise: bool) -> Verdict {
    subtype(&context(), s.clone(), t.clone(), oracle, precise).expect("shapes agree by construction")
}


/// Seeds used by both the subtyping suite and the acceptance harness.
pub const REFLEXIVITY_SEED: u64 = 1;
pub const CHAIN_SEED: u64 = 2;
pub const MIDDLE_SEED: u64 = 3;

/// `(types, failures)`: every type is compared with itself, loosely and
/// precisely.
pub fn reflexivity_failures(oracle: &Oracle<'_>) -> (usize, Vec<String>) {
    let types = well_defined_types(REFLEXIVITY_SEED, TYPES, oracle);
    let mut failures = Vec::new();
    for t in &types {
        for precise in [false, true] {
            let v = sub(t, t, oracle, precise);
            if v.is_refuted() {
                failures.push(format!("{t} (precise {precise}): {v}"));
            }
        }
    }
    (types.len(), failures)
}

/// `(middles, chains, failures)`. Each middle type `t` gets a chain
/// `s ⊑ t ⊑ u` built by variance and one with random ends; a chain counts
/// when both premises are Verified, and fails when `s ⊑ u` is then not
/// Verified.
pub fn transitivity_failures(oracle: &Oracle<'_>) -> (usize, usize, Vec<String>) {
    let ctx = context();
    let mut g = Gen(ChaCha8Rng::seed_from_u64(CHAIN_SEED));
    let middles = well_defined_types(MIDDLE_SEED, TYPES, oracle);
    let (mut chains, mut failures) = (0, Vec::new());
    for t in &middles {
        let candidates = [(g.shift(t, false), g.shift(t, true)), (g.same_shape(t), g.same_shape(t))];
        for (s, u) in candidates {
            if !(well_defined(&ctx, s.clone(), oracle).is_verified() && well_defined(&ctx, u.clone(), oracle).is_verified()) {
                continue;
            }
            if sub(&s, t, oracle, false).is_verified() && sub(t, &u, oracle, false).is_verified() {
                chains += 1;
                let v = sub(&s, &u, oracle, false);
                if !v.is_verified() {
                    failures.push(format!("{s} ⊑ {t} ⊑ {u} but {v}"));
                }
            }
        }
    }
    (middles.len(), chains, failures)
}
