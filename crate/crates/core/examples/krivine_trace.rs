//! Running `dbl 2` on the Krivine machine with a trace of every transition.

use dlpcf::machine::{run_with, RunOptions};
use dlpcf::pcf::{self, wh_eval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dbl = pcf::parse(include_str!("../data/dbl.pcf"))?;
    let t = dbl.apply_nat(2);
    println!("program: {t}\nsize:    {}\n", t.size());

    println!("step\trule\t|C|\thead");
    let mut out = std::io::stdout();
    let r = run_with(
        &t,
        10_000,
        RunOptions {
            check_subterm_sizes: true,
            trace: Some(&mut out),
        },
    )?;
    let (value, reductions) = wh_eval(&t, 10_000)?;
    println!(
        "\nmachine: {} in {} steps (largest configuration {})\nreducer: {value} in {reductions} reductions",
        r.value, r.steps, r.max_config_size
    );
    Ok(())
}
