//! The program corpus run three ways: on the Krivine machine, by weak-head
//! reduction, and by a big-step call-by-name evaluator kept here.

use std::fs;
use std::path::Path;
use std::rc::Rc;

use dlpcf::machine::{run, run_with, RunOptions};
use dlpcf::pcf::{self, pcf_check, wh_eval, PcfType, Term};

const FUEL: u64 = 1_000_000;

fn corpus() -> Vec<(String, Term)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus");
    let mut out: Vec<(String, Term)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pcf"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, pcf::parse(&fs::read_to_string(&p).unwrap()).unwrap())
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// A suspended computation: a term with the values of its free variables.
#[derive(Clone)]
struct Thunk {
    term: Rc<Term>,
    env: Env,
}

#[derive(Clone, Default)]
struct Env(Option<Rc<(Thunk, Env)>>);

impl Env {
    fn push(&self, t: Thunk) -> Env {
        Env(Some(Rc::new((t, self.clone()))))
    }

    fn get(&self, i: usize) -> Thunk {
        let node = self.0.as_ref().expect("unbound variable");
        if i == 0 {
            node.0.clone()
        } else {
            node.1.get(i - 1)
        }
    }
}

enum Value {
    Nat(u64),
    Fun(Rc<Term>, Env),
}

fn eval(t: &Rc<Term>, env: &Env, fuel: &mut u64) -> Option<Value> {
    *fuel = fuel.checked_sub(1)?;
    let nat = |t: &Term, env: &Env, fuel: &mut u64| match eval(&Rc::new(t.clone()), env, fuel)? {
        Value::Nat(n) => Some(n),
        Value::Fun(..) => panic!("ill-typed"),
    };
    match &**t {
        Term::Var(i) => {
            let th = env.get(*i);
            eval(&th.term, &th.env, fuel)
        }
        Term::Const(n) => Some(Value::Nat(*n)),
        Term::Succ(u) => Some(Value::Nat(nat(u, env, fuel)? + 1)),
        Term::Pred(u) => Some(Value::Nat(nat(u, env, fuel)?.saturating_sub(1))),
        Term::Lam(_, body) => Some(Value::Fun(Rc::new((**body).clone()), env.clone())),
        Term::App(f, a) => match eval(&Rc::new((**f).clone()), env, fuel)? {
            Value::Fun(body, closure) => {
                let arg = Thunk {
                    term: Rc::new((**a).clone()),
                    env: env.clone(),
                };
                eval(&body, &closure.push(arg), fuel)
            }
            Value::Nat(_) => panic!("ill-typed"),
        },
        Term::IfZ(c, z, s) => {
            let branch = if nat(c, env, fuel)? == 0 { z } else { s };
            eval(&Rc::new((**branch).clone()), env, fuel)
        }
        Term::Fix(_, body) => {
            let me = Thunk {
                term: t.clone(),
                env: env.clone(),
            };
            eval(&Rc::new((**body).clone()), &env.push(me), fuel)
        }
    }
}

fn big_step(t: &Term) -> Option<u64> {
    let mut fuel = FUEL;
    match eval(&Rc::new(t.clone()), &Env::default(), &mut fuel)? {
        Value::Nat(n) => Some(n),
        Value::Fun(..) => None,
    }
}

#[test]
fn the_corpus_is_large_enough_and_well_typed() {
    let programs = corpus();
    assert!(programs.len() >= 20);
    for (name, t) in &programs {
        assert!(t.is_closed(), "{name}");
        pcf_check(&[], t, &PcfType::Nat).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    assert!(programs.iter().any(|(_, t)| *t == Term::Pred(Box::new(Term::Const(0)))));
    assert!(programs.iter().any(|(_, t)| matches!(t, Term::IfZ(..))));
    assert!(programs.iter().any(|(_, t)| matches!(t, Term::App(f, _) if matches!(**f, Term::Fix(..)))));
}

#[test]
fn machine_reducer_and_evaluator_agree() {
    for (name, t) in corpus() {
        let machine = run(&t, FUEL).unwrap_or_else(|e| panic!("{name}: {e}"));
        let (reduced, _) = wh_eval(&t, FUEL).unwrap_or_else(|e| panic!("{name}: {e}"));
        let big = big_step(&t).unwrap_or_else(|| panic!("{name}: the evaluator ran out of fuel"));
        assert_eq!((machine.value, reduced), (big, big), "{name}");
    }
}

#[test]
fn recorded_terms_never_outgrow_the_program() {
    for (name, t) in corpus() {
        run_with(&t, FUEL, RunOptions::checked()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn known_values() {
    let expected = [
        ("03_pred_zero", 0),
        ("08_ifz_pred_zero", 1),
        ("11_discarded_divergence", 6),
        ("12_dbl", 10),
        ("14_mult", 12),
        ("15_monus", 0),
        ("16_fib", 5),
        ("22_ackermann_small", 7),
        ("24_sum_to", 21),
    ];
    let programs = corpus();
    for (name, value) in expected {
        let t = &programs.iter().find(|p| p.0 == name).unwrap().1;
        assert_eq!(run(t, FUEL).unwrap().value, value, "{name}");
    }
}

#[test]
fn configurations_stay_linear_in_the_steps() {
    for (name, t) in corpus() {
        let r = run(&t, FUEL).unwrap();
        assert!(r.max_config_size <= t.size() * (r.steps + 1), "{name}: {} vs {}", r.max_config_size, t.size() * (r.steps + 1));
    }
}
