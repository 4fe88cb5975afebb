//! Subtyping, equivalence and sums of modal types.

use dlpcf::index::{ConstraintSet, EquationalProgram, Oracle};
use dlpcf::types::{bounded_sum_modal, equiv, subtype, sum_modal, well_defined, BasicType, ModalType};

fn b(s: &str) -> BasicType {
    s.parse().unwrap()
}

fn m(s: &str) -> ModalType {
    s.parse().unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arith = EquationalProgram::parse(include_str!("../data/arith.eqs"))?;
    let oracle = Oracle::new(&arith, 6, 100_000);
    let a = ConstraintSet::with_vars(["a"]);

    let pairs = [
        ("Nat[a, a]", "Nat[0, mult(2, a)]"),
        ("Nat[0, mult(2, a)]", "Nat[a, a]"),
        ("[b < 3] Nat[b] -o Nat[a]", "[b < 5] Nat[b] -o Nat[0, a + 1]"),
        ("[b < 5] Nat[b] -o Nat[a]", "[b < 3] Nat[b] -o Nat[a]"),
    ];
    for (s, t) in pairs {
        let loose = subtype(&a, b(s), b(t), &oracle, false)?;
        let precise = subtype(&a, b(s), b(t), &oracle, true)?;
        println!("{s}  ⊑  {t}\n    {loose}; precisely {precise}");
    }

    println!("\n↓[c < a] Nat[gt(a, c)]: {}", well_defined(&a, m("[c < a] Nat[gt(a, c)]"), &oracle));
    println!(
        "[x < a] Nat[x] ≅ [y < a] Nat[y]: {}",
        equiv(&a, m("[x < a] Nat[x]"), m("[y < a] Nat[y]"), &oracle)?
    );

    // [c < 2] Nat[c] ⊎ [c < 3] Nat[c + 2] = [c < 5] Nat[c]
    let (sum, v) = sum_modal(&m("[c < 2] Nat[c]"), &m("[c < 3] Nat[c + 2]"), ("c", &b("Nat[c]")), &ConstraintSet::new(), &oracle)?;
    println!("\nbinary sum: {sum} ({v})");

    // Σ_{d < 3} [e < 2] Nat[mult(2, d) + e] = [c < 6] Nat[c]
    let (sum, v) = bounded_sum_modal(
        "d",
        &"3".parse()?,
        &m("[e < 2] Nat[mult(2, d) + e]"),
        ("c", &b("Nat[c]"), &"2".parse()?),
        &ConstraintSet::new(),
        &oracle,
    )?;
    println!("bounded sum: {sum} ({v})");
    Ok(())
}
