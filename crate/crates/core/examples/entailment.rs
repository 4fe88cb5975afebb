//! Bounded entailment: verdicts are Verified up to a bound, Refuted with a
//! witness, or Unknown when evaluation runs out of fuel.

use dlpcf::index::{entails, Constraint, ConstraintSet, EquationalProgram, Goal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = EquationalProgram::parse(
        "add(0, b) = b\nadd(a + 1, b) = add(a, b) + 1\nloop(n) = loop(n + 1)\nhalf(0) = 0\nhalf(n + 2) = half(n) + 1\n",
    )?;
    let ab = ConstraintSet::with_vars(["a", "b"]);
    let ordered = ab.assume("a <= b".parse::<Constraint>()?);

    let cases: Vec<(&ConstraintSet, Goal)> = vec![
        (&ab, Goal::Holds("add(a, b) = a + b".parse::<Constraint>()?)),
        (&ab, Goal::Holds("a - b <= a".parse::<Constraint>()?)),
        (&ab, Goal::Holds("a - b + b = a".parse::<Constraint>()?)),
        (&ordered, Goal::Holds("a - b + b = b".parse::<Constraint>()?)),
        (&ab, Goal::Defined("half(a + a)".parse()?)),
        (&ab, Goal::Defined("half(a)".parse()?)),
        (&ab, Goal::Holds("loop(a) >= 0".parse::<Constraint>()?)),
    ];
    for (ctx, goal) in cases {
        println!("{ctx} ⊨ {goal}\n    {}", entails(ctx, &goal, &e, 8, 10_000));
    }
    Ok(())
}
