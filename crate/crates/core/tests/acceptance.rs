//! One PASS/FAIL line per acceptance criterion, with the measurements that
//! decided it. Exits non-zero when any criterion fails.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dlpcf::checker::{check, erase_derivation, Derivation, DerivationError};
use dlpcf::cli::cmd_soundness;
use dlpcf::index::{eval_index, forest, lit, var, Assignment, EquationalProgram, Oracle, Verdict, DEFAULT_FUEL};
use dlpcf::machine::{run_with, MachineError, RunOptions};
use dlpcf::pcf::{self, wh_eval, PcfType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::forest::{forest_as_sum_instance, kstar, shifted_forest_instance, walk, Table};
use common::types::{program as type_program, reflexivity_failures, transitivity_failures, BOUND};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn read(name: &str) -> String {
    fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn arith() -> EquationalProgram {
    EquationalProgram::parse(&read("arith.eqs")).unwrap()
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn forest_example() -> Outcome {
    let e = EquationalProgram::parse(&read("kstar.eqs")).unwrap();
    let body = dlpcf::index::app("kstar", vec![var("a")]);
    let instances = [(0, 2, 13), (0, 1, 8), (8, 1, 5), (2, 3, 6)];
    let table = kstar();
    let mut got = Vec::new();
    let mut pass = true;
    for (start, trees, expected) in instances {
        let t = forest("a", lit(start), lit(trees), body.clone());
        let v = eval_index(&t, &Assignment::new(), &e, DEFAULT_FUEL).ok();
        let walked = walk(start, trees, &|n| table.get(n));
        pass &= v == Some(expected) && walked == Some(expected);
        got.push(format!("△({start},{trees})={}", v.map_or("?".into(), |v| v.to_string())));
    }
    outcome(pass, got.join(" "))
}

fn forest_lemmas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut table = || Table {
        children: (0..rng.random_range(0..10)).map(|_| rng.random_range(0..=2)).collect(),
        total: rng.random_bool(0.5),
    };
    let mut failures = Vec::new();
    let (mut shifted, mut summed) = (0, 0);
    for i in 0..=4 {
        for j in 0..=4 {
            for k in 0..=4 {
                for _ in 0..2 {
                    shifted += 1;
                    if let Err(e) = shifted_forest_instance(&table(), i, j, k) {
                        failures.push(e);
                    }
                }
            }
        }
    }
    for j in 0..=4 {
        for _ in 0..50 {
            summed += 1;
            if let Err(e) = forest_as_sum_instance(&table(), j) {
                failures.push(e);
            }
        }
    }
    let detail = format!("{shifted} shift instances, {summed} sum instances, {} failures", failures.len());
    match failures.first() {
        None => outcome(true, detail),
        Some(first) => outcome(false, format!("{detail}; first: {first}")),
    }
}

fn dbl_derivation(file: &str) -> Outcome {
    let d = match Derivation::parse(&read(file), None) {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("{file} does not parse: {e}")),
    };
    let erased = match erase_derivation(&d) {
        Ok(p) => p.ty,
        Err(e) => return outcome(false, format!("erasure fails: {e}")),
    };
    let report = match check(&d, &arith(), 6, DEFAULT_FUEL, false) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("structural: {e}")),
    };
    let nat_to_nat = erased == PcfType::arrow(PcfType::Nat, PcfType::Nat);
    let mut detail = format!("{file}: {}; erasure {erased}", report.overall);
    if let Some(o) = report.first_refuted() {
        detail.push_str(&format!("; first refuted: {} {} `{}`", o.path, o.rule, o.label));
    }
    outcome(report.overall.is_verified() && nat_to_nat, detail)
}

fn dbl_soundness() -> Outcome {
    let e = arith();
    let dbl = pcf::parse(&read("dbl.pcf")).unwrap();
    let mut failing = Vec::new();
    for n in 0..=8u64 {
        let t = dbl.clone().apply_nat(n);
        let run = match run_with(&t, DEFAULT_FUEL, RunOptions::checked()) {
            Ok(r) => r,
            Err(err) => return outcome(false, format!("n={n}: {err}")),
        };
        let rho = Assignment::from_pairs([("a", n)]);
        let upper = eval_index(&"mult(2, a)".parse().unwrap(), &rho, &e, DEFAULT_FUEL).unwrap();
        let limit = t.size() * (n + 1);
        let ok = run.steps <= limit && run.value == 2 * n && run.value <= upper && upper <= run.value;
        if !ok {
            failing.push(format!("n={n}: {} steps > {}·{} = {limit}", run.steps, t.size(), n + 1));
        }
    }
    if failing.is_empty() {
        outcome(true, "9 of 9 rows pass")
    } else {
        outcome(false, format!("{} of 9 rows fail: {}", failing.len(), failing.join("; ")))
    }
}

fn dbl_soundness_golden() -> Outcome {
    let ns: Vec<u64> = (0..=8).collect();
    match cmd_soundness(&data("dbl.deriv"), Some(&data("dbl.pcf")), Some(&data("arith.eqs")), &ns, 6, DEFAULT_FUEL, true) {
        Ok(r) => {
            let worst = r
                .rows
                .last()
                .map(|row| format!("{}/{}", row.steps, row.size * (row.weight_value.unwrap_or(0) + 1)))
                .unwrap_or_default();
            outcome(r.passed(), format!("weight {}; n=8 steps/limit {worst}", r.weight))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn mutations() -> Outcome {
    let golden = read("dbl.deriv");
    let weight = "\"a + sum(b < a + 1, a - b)\"";
    let cases: [(&str, &str, String); 7] = [
        ("weight a → a∸1", weight, "\"a - 1 + sum(b < a + 1, a - b)\"".into()),
        ("bound a+1 → a", "[b < a + 1] Nat[a] -o", "[b < a] Nat[a] -o".into()),
        ("interval 2a → 2a∸1", "Nat[mult(2, a)]\"", "Nat[mult(2, a) - 1]\"".into()),
        ("R annotation L", "(L \"a + 1\")", "(L \"a\")".into()),
        ("R annotation M", "(M \"a + 1\")", "(M \"a\")".into()),
        ("R annotation I", "(I \"gt(a, b)\")", "(I \"gt(a, b) - 1\")".into()),
        ("R annotation K", "(K \"a - b\")", "(K \"0\")".into()),
    ];
    let e = arith();
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, from, to) in &cases {
        assert!(golden.contains(from), "{from}");
        let mutated = golden.replace(from, to);
        let verdict = match Derivation::parse(&mutated, None) {
            Err(DerivationError::Structural(err)) => format!("structural ({err})"),
            Err(err) => {
                pass = false;
                format!("unparsable ({err})")
            }
            Ok(d) => match check(&d, &e, 6, DEFAULT_FUEL, false) {
                Err(err) => format!("structural ({err})"),
                Ok(r) => {
                    pass &= !r.overall.is_verified() && !matches!(r.overall, Verdict::Unknown { .. });
                    r.overall.to_string()
                }
            },
        };
        lines.push(format!("{name}: {verdict}"));
    }
    outcome(pass, lines.join("; "))
}

fn corpus() -> Vec<(String, pcf::Term)> {
    let mut files: Vec<PathBuf> = fs::read_dir(data("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pcf"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let t = pcf::parse(&fs::read_to_string(&p).unwrap()).unwrap();
            pcf::pcf_check(&[], &t, &PcfType::Nat).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p.file_name().unwrap().to_string_lossy().into_owned(), t)
        })
        .collect()
}

fn agreement() -> Outcome {
    let programs = corpus();
    let mut mismatches = Vec::new();
    for (name, t) in &programs {
        let machine = run_with(t, DEFAULT_FUEL, RunOptions { check_subterm_sizes: false, trace: None }).map(|r| r.value);
        let reducer = wh_eval(t, DEFAULT_FUEL).map(|(v, _)| v);
        match (machine, reducer) {
            (Ok(m), Ok(r)) if m == r => {}
            (m, r) => mismatches.push(format!("{name}: machine {m:?}, reducer {r:?}")),
        }
    }
    let detail = format!("{} programs, {} mismatches", programs.len(), mismatches.len());
    outcome(programs.len() >= 20 && mismatches.is_empty(), if mismatches.is_empty() { detail } else { format!("{detail}: {}", mismatches.join("; ")) })
}

fn environment_sizes() -> Outcome {
    let programs = corpus();
    let (mut steps, mut violations) = (0, Vec::new());
    for (name, t) in &programs {
        match run_with(t, DEFAULT_FUEL, RunOptions::checked()) {
            Ok(r) => steps += r.steps,
            Err(e @ MachineError::SubtermSizeViolation { .. }) => violations.push(format!("{name}: {e}")),
            Err(e) => violations.push(format!("{name}: {e}")),
        }
    }
    outcome(violations.is_empty(), format!("{steps} checked steps over {} programs, {} violations {}", programs.len(), violations.len(), violations.join("; ")).trim_end().to_string())
}

fn subtyping() -> Outcome {
    let e = type_program();
    let oracle = Oracle::new(&e, BOUND, 100_000);
    let (types, refl) = reflexivity_failures(&oracle);
    let (middles, chains, trans) = transitivity_failures(&oracle);
    let mut detail = format!(
        "reflexivity: {} of {types} refuted; transitivity: {} of {chains} chains over {middles} types fail",
        refl.len(),
        trans.len()
    );
    if let Some(first) = refl.first().or(trans.first()) {
        detail.push_str(&format!("; first: {first}"));
    }
    outcome(refl.is_empty() && trans.is_empty() && chains >= types / 2, detail)
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1", "forest cardinality example", Duration::from_secs(1), forest_example),
        ("2", "forest lemmas", Duration::from_secs(30), forest_lemmas),
        ("3", "dbl derivation checks at bound 6", Duration::from_secs(10), || dbl_derivation("dbl_weight_a.deriv")),
        ("4", "intensional soundness of dbl with I = a", Duration::from_secs(5), dbl_soundness),
        ("5", "mutation rejection", Duration::from_secs(30), mutations),
        ("6", "machine/reducer agreement", Duration::from_secs(10), agreement),
        ("7", "environment-size lemma", Duration::from_secs(10), environment_sizes),
        ("8", "subtyping metamorphic suite", Duration::from_secs(60), subtyping),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let pass = o.pass && took <= limit;
        failed += usize::from(!pass);
        println!(
            "{} criterion {id}: {name} [{:.2}s of {}s] {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    for (name, run) in [
        ("repaired dbl derivation checks at bound 6", (|| dbl_derivation("dbl.deriv")) as fn() -> Outcome),
        ("intensional soundness of dbl under its checked weight", dbl_soundness_golden),
    ] {
        let o = run();
        println!("INFO {}: {name}: {}", if o.pass { "holds" } else { "fails" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} of 8 criteria fail");
        std::process::exit(1);
    }
    println!("all 8 criteria pass");
}
