//! Checking two derivations for `dbl`: one whose weights add up, and one
//! whose root weight is only `a`.

use dlpcf::checker::{check, erase_derivation, root_bounds, Derivation};
use dlpcf::index::{EquationalProgram, DEFAULT_FUEL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let arith = EquationalProgram::parse(include_str!("../data/arith.eqs"))?;
    for (name, src) in [
        ("dbl.deriv", include_str!("../data/dbl.deriv")),
        ("dbl_weight_a.deriv", include_str!("../data/dbl_weight_a.deriv")),
    ] {
        let d: Derivation = src.parse()?;
        let (weight, ty) = root_bounds(&d);
        let erased = erase_derivation(&d)?;
        println!("== {name}: {} nodes, ⊢_{{{weight}}} : {ty}", d.node_count());
        println!("   erases to {}", erased.ty);
        let report = check(&d, &arith, 6, DEFAULT_FUEL, false)?;
        print!("{}", report.to_table());
        if let Some(o) = report.first_refuted() {
            println!("   first failure at {} (rule {}): {}", o.path, o.rule, o.label);
        }
        println!();
    }
    Ok(())
}
