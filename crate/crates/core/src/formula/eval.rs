use std::collections::BTreeSet;

use super::{Formula, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Decides a formula with a single bound variable by trying finitely many
/// values for it: every root of an atom at `point`, midpoints between
/// consecutive roots, and one step beyond each end.
///
/// Independent of quantifier elimination; used to check it.
pub fn eval_quantified_oracle<S: Scalar>(formula: &Formula<S>, point: &Point<S>) -> Result<bool> {
    let bound: BTreeSet<String> = formula.bound_variables().into_iter().collect();
    if bound.len() > 1 {
        return Err(Error::TooManyBoundVariables(bound.len()));
    }
    eval_node(formula, point)
}

fn eval_node<S: Scalar>(f: &Formula<S>, point: &Point<S>) -> Result<bool> {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.evaluate(point),
        Formula::And(fs) => {
            for g in fs {
                if !eval_node(g, point)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval_node(g, point)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Not(g) => Ok(!eval_node(g, point)?),
        Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
            let var = &vs[0];
            let universal = matches!(f, Formula::Forall(..));
            for value in candidates(body, var, point)? {
                let mut p = point.clone();
                p.insert(var.clone(), value);
                let holds = body.evaluate(&p)?;
                if holds != universal {
                    return Ok(!universal);
                }
            }
            Ok(universal)
        }
    }
}

fn candidates<S: Scalar>(body: &Formula<S>, var: &str, point: &Point<S>) -> Result<Vec<S>> {
    let mut roots = BTreeSet::new();
    for atom in body.atoms() {
        let Some(k) = atom.term.coeffs.get(var) else {
            continue;
        };
        let mut rest = atom.term.clone();
        rest.coeffs.remove(var);
        let r = rest.evaluate(point)?;
        roots.insert(-r / k.clone());
    }
    let roots: Vec<S> = roots.into_iter().collect();
    let mut out = roots.clone();
    for w in roots.windows(2) {
        out.push((w[0].clone() + w[1].clone()) / S::two());
    }
    match (roots.first(), roots.last()) {
        (Some(lo), Some(hi)) => {
            out.push(lo.clone() - S::one());
            out.push(hi.clone() + S::one());
        }
        _ => out.push(S::zero()),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use num_rational::BigRational;

    type Q = BigRational;

    fn check(text: &str, vals: &[(&str, i64)]) -> Result<bool> {
        let p = parse(&format!("theory doag\nvars x: x1 x2 ; y: y1\nformula {text}")).unwrap();
        let point: Point<Q> = vals.iter().map(|&(v, n)| (v.to_string(), Q::from_int(n))).collect();
        eval_quantified_oracle(&p.formula, &point)
    }

    #[test]
    fn density() {
        let f = "(exists (z) (and (< x1 z) (< z x2)))";
        assert!(check(f, &[("x1", 0), ("x2", 1)]).unwrap());
        assert!(!check(f, &[("x1", 1), ("x2", 0)]).unwrap());
    }

    #[test]
    fn solves_equations() {
        let p = parse("theory doag\nvars x: x1 ; y: y1\nformula (exists (x2) (= x2 (+ x1 y1)))").unwrap();
        let point: Point<Q> = [("x1", 0), ("y1", 5)]
            .iter()
            .map(|&(v, n)| (v.to_string(), Q::from_int(n)))
            .collect();
        assert!(eval_quantified_oracle(&p.formula, &point).unwrap());
    }

    #[test]
    fn universal() {
        let f = "(forall (z) (or (< z x1) (< x2 z)))";
        assert!(!check(f, &[("x1", 0), ("x2", 1)]).unwrap());
        assert!(check(f, &[("x1", 1), ("x2", 0)]).unwrap());
    }

    #[test]
    fn rejects_two_bound_variables() {
        let f = "(exists (z) (exists (w) (< z w)))";
        assert_eq!(check(f, &[]), Err(Error::TooManyBoundVariables(2)));
    }
}
