//! Loading an equational program and evaluating index terms against it.

use dlpcf::index::{eval_index, Assignment, EquationalProgram, IndexTerm, DEFAULT_FUEL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arith = EquationalProgram::parse(include_str!("../data/arith.eqs"))?;
    println!("{} rules over {:?}", arith.rules().len(), ["gt", "add", "mult"]);

    let rho = Assignment::from_pairs([("a", 7), ("b", 3)]);
    for src in ["mult(2, a)", "gt(a, b)", "gt(b, a)", "a - b - 10", "sum(c < a, c)", "add(a, mult(b, b))"] {
        let t: IndexTerm = src.parse()?;
        println!("{src:<20} at {rho} = {}", eval_index(&t, &rho, &arith, DEFAULT_FUEL)?);
    }

    // Programs are checked when loaded.
    for bad in [
        "f(0) = 1\nf(n) = 2\n",
        "g(a, a) = a\n",
        "h(a) = b\n",
        "k(0) = k(0, 1)\n",
    ] {
        let err = EquationalProgram::parse(bad).unwrap_err();
        println!("rejected {:?}: {err}", bad.trim());
    }

    // A symbol with no matching equation is undefined; a loop runs out of fuel.
    let partial = EquationalProgram::parse("half(0) = 0\nhalf(n + 2) = half(n) + 1\nloop(n) = loop(n + 1)\n")?;
    for src in ["half(6)", "half(5)", "loop(0)"] {
        let t: IndexTerm = src.parse()?;
        println!("{src:<8} -> {:?}", eval_index(&t, &Assignment::new(), &partial, 10_000));
    }
    Ok(())
}
