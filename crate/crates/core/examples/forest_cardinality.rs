//! Counting the nodes of a two-tree forest with `forest(a, I, J, K)`.
//!
//! The branching of every node is given by `kstar`, a table defined in
//! `data/kstar.eqs`. Asking for a forest rooted past the last defined label
//! of a partial table makes the term undefined rather than zero.

use dlpcf::index::{app, eval_index, forest, lit, var, Assignment, EquationalProgram, DEFAULT_FUEL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kstar = EquationalProgram::parse(include_str!("../data/kstar.eqs"))?;
    let k = app("kstar", vec![var("a")]);

    for (start, trees, what) in [
        (0, 2, "the whole forest"),
        (0, 1, "the first tree"),
        (8, 1, "the second tree"),
        (2, 3, "the subtrees rooted at 2, 5 and 6"),
    ] {
        let t = forest("a", lit(start), lit(trees), k.clone());
        let n = eval_index(&t, &Assignment::new(), &kstar, DEFAULT_FUEL)?;
        println!("{t:<28} = {n:>2}   {what}");
    }

    let partial = EquationalProgram::parse("h(0) = 2\nh(1) = 0\n")?;
    let t = forest("a", lit(0), lit(1), app("h", vec![var("a")]));
    match eval_index(&t, &Assignment::new(), &partial, DEFAULT_FUEL) {
        Ok(n) => println!("{t} = {n}"),
        Err(e) => println!("{t} is undefined: {e}"),
    }
    Ok(())
}
