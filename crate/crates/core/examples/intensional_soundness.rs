//! Measured machine steps against the bound `|t n| · (⟦I⟧ + 1)` given by a
//! checked derivation of `dbl`.

use std::path::Path;

use dlpcf::cli::{cmd_soundness, render_soundness, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let ns: Vec<u64> = (0..=10).collect();
    let report = cmd_soundness(
        &data.join("dbl.deriv"),
        Some(&data.join("dbl.pcf")),
        Some(&data.join("arith.eqs")),
        &ns,
        6,
        1_000_000,
        true,
    )?;
    print!("{}", render_soundness(&report, Format::Human));

    // The same runs against the weight `a`, which the checker refutes.
    println!();
    let report = cmd_soundness(&data.join("dbl_weight_a.deriv"), None, Some(&data.join("arith.eqs")), &ns, 6, 1_000_000, false)?;
    print!("{}", render_soundness(&report, Format::Human));
    Ok(())
}
