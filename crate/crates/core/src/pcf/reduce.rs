use thiserror::Error;

use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    /// A normal form that is not a numeral sits where a numeral is needed,
    /// or a non-function is applied.
    #[error("stuck at `{0}`")]
    Stuck(String),
    #[error("evaluation stopped at normal form `{0}`, which is not a numeral")]
    NotANumeral(String),
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(u64),
    #[error("numeral overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Reduced(Term),
    Normal,
}

/// One weak-head reduction step on a closed term.
pub fn wh_step(t: &Term) -> Result<Step, ReduceError> {
    let stuck = || Err(ReduceError::Stuck(t.to_string()));
    Ok(Step::Reduced(match t {
        Term::Const(_) | Term::Lam(..) => return Ok(Step::Normal),
        Term::Var(_) => return stuck(),
        Term::Fix(_, body) => body.instantiate(t),
        Term::App(f, a) => match &**f {
            Term::Lam(_, body) => body.instantiate(a),
            _ => match wh_step(f)? {
                Step::Reduced(g) => Term::app(g, (**a).clone()),
                Step::Normal => return stuck(),
            },
        },
        Term::Succ(u) => match &**u {
            Term::Const(n) => Term::Const(n.checked_add(1).ok_or(ReduceError::Overflow)?),
            _ => match wh_step(u)? {
                Step::Reduced(v) => Term::succ(v),
                Step::Normal => return stuck(),
            },
        },
        Term::Pred(u) => match &**u {
            Term::Const(n) => Term::Const(n.saturating_sub(1)),
            _ => match wh_step(u)? {
                Step::Reduced(v) => Term::pred(v),
                Step::Normal => return stuck(),
            },
        },
        Term::IfZ(s, z, n) => match &**s {
            Term::Const(0) => (**z).clone(),
            Term::Const(_) => (**n).clone(),
            _ => match wh_step(s)? {
                Step::Reduced(v) => Term::IfZ(Box::new(v), z.clone(), n.clone()),
                Step::Normal => return stuck(),
            },
        },
    }))
}

/// Reduces a closed program to a numeral, returning it with the number of
/// steps taken. At most `fuel` steps are attempted.
pub fn wh_eval(t: &Term, fuel: u64) -> Result<(u64, u64), ReduceError> {
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        match wh_step(&cur)? {
            Step::Normal => {
                return match cur {
                    Term::Const(n) => Ok((n, steps)),
                    other => Err(ReduceError::NotANumeral(other.to_string())),
                }
            }
            Step::Reduced(next) => {
                if steps == fuel {
                    return Err(ReduceError::FuelExhausted(steps));
                }
                steps += 1;
                cur = next;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::parse::parse;

    fn step(src: &str) -> Step {
        wh_step(&parse(src).unwrap()).unwrap()
    }

    #[test]
    fn every_reduction_rule_fires() {
        assert_eq!(step("p 0"), Step::Reduced(Term::Const(0)));
        assert_eq!(step("p 4"), Step::Reduced(Term::Const(3)));
        assert_eq!(step("s 4"), Step::Reduced(Term::Const(5)));
        assert_eq!(step("ifz 3 then 1 else 2"), Step::Reduced(Term::Const(2)));
        assert_eq!(step("ifz 0 then 1 else 2"), Step::Reduced(Term::Const(1)));
        assert_eq!(step("7"), Step::Normal);
        assert_eq!(step("\\x. x"), Step::Normal);
        assert_eq!(step("(\\x. s x) 2"), Step::Reduced(parse("s 2").unwrap()));
    }

    #[test]
    fn fix_unfolds_once() {
        let t = parse("fix f. \\x. f x").unwrap();
        let Step::Reduced(u) = wh_step(&t).unwrap() else { panic!() };
        assert_eq!(u, parse("\\x. (fix f. \\y. f y) x").unwrap());
    }

    #[test]
    fn congruence_under_s_p_ifz_and_application() {
        assert_eq!(step("s (p 3)"), Step::Reduced(parse("s 2").unwrap()));
        assert_eq!(step("ifz p 1 then 5 else 6"), Step::Reduced(parse("ifz 0 then 5 else 6").unwrap()));
        assert_eq!(
            step("(ifz 0 then \\x. x else \\x. 0) 9"),
            Step::Reduced(parse("(\\x. x) 9").unwrap())
        );
    }

    #[test]
    fn stuck_terms() {
        assert!(matches!(wh_step(&parse("s (\\x. x)").unwrap()), Err(ReduceError::Stuck(_))));
        assert!(matches!(wh_step(&parse("3 4").unwrap()), Err(ReduceError::Stuck(_))));
    }

    #[test]
    fn evaluation() {
        assert_eq!(wh_eval(&parse("s 0").unwrap(), 10), Ok((1, 1)));
        let dbl = parse("fix f. \\x. ifz x then 0 else s(s(f (p x)))").unwrap();
        let (v, k) = wh_eval(&dbl.clone().apply_nat(3), 10_000).unwrap();
        assert_eq!(v, 6);
        assert!(k > 0);
        let omega = parse("fix f. \\x. ifz x then 0 else s(s(f x))").unwrap();
        assert_eq!(wh_eval(&omega.clone().apply_nat(0), 1000).map(|r| r.0), Ok(0));
        assert!(matches!(
            wh_eval(&omega.apply_nat(1), 1000),
            Err(ReduceError::FuelExhausted(1000))
        ));
        assert!(matches!(
            wh_eval(&parse("\\x. x").unwrap(), 10),
            Err(ReduceError::NotANumeral(_))
        ));
    }
}
