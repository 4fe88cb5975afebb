//! PCF terms: parsing, size, simple types and weak-head reduction.

use dlpcf::pcf::{self, pcf_check, pcf_typecheck, wh_step, PcfType, Step};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let add = pcf::parse("fix add:Nat -> Nat -> Nat. \\x:Nat. \\y:Nat. ifz x then y else s(add p(x) y)")?;
    println!("{add}\n  size {}, type {}", add.size(), pcf_typecheck(&[], &add)?);

    // Unannotated binders are fine where the expected type is known.
    let dbl = pcf::parse(include_str!("../data/dbl.pcf"))?;
    pcf_check(&[], &dbl, &PcfType::arrow(PcfType::Nat, PcfType::Nat))?;
    println!("{dbl}\n  checks against Nat -> Nat; inferring it fails: {}", pcf_typecheck(&[], &dbl).unwrap_err());

    let mut t = add.apply_nat(2).apply_nat(1);
    println!("\nreducing {t}");
    let mut n = 0;
    while let Step::Reduced(next) = wh_step(&t)? {
        n += 1;
        t = next;
        println!("{n:>3}  {t}");
    }

    for bad in ["\\x. x x", "s(\\x:Nat. x)", "ifz 0 then 1 else \\y:Nat. y"] {
        let t = pcf::parse(bad)?;
        println!("{bad:<30} {}", pcf_typecheck(&[], &t).map_or_else(|e| e.to_string(), |ty| ty.to_string()));
    }
    Ok(())
}
