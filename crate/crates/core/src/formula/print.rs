//! Canonical s-expression rendering. `parse(print(p)) == p` for every
//! canonical problem.

use std::fmt;

use super::{Atom, Formula, LinearTerm, Problem, Relation};
use crate::scalar::{render, Scalar};

fn side<S: Scalar>(parts: &[(String, S)], constant: Option<S>) -> String {
    let mut items: Vec<String> = parts
        .iter()
        .map(|(v, c)| {
            if c.is_one() {
                v.clone()
            } else {
                format!("(* {} {v})", render(c))
            }
        })
        .collect();
    if let Some(c) = constant {
        items.push(render(&c));
    }
    match items.len() {
        0 => "0".to_string(),
        1 => items.pop().unwrap(),
        _ => format!("(+ {})", items.join(" ")),
    }
}

pub(crate) fn atom_sexpr<S: Scalar>(a: &Atom<S>) -> String {
    let rel = a.relation.symbol();
    let t = &a.term;
    if t.coeffs.len() == 1 {
        // Single variable: print as `v REL c` / `c REL v` with a solved constant.
        let (v, k) = t.coeffs.iter().next().unwrap();
        let c = -t.constant.clone() / k.clone();
        return match (a.relation, k.is_positive()) {
            (Relation::Eq, _) => format!("(= {v} {})", render(&c)),
            (_, true) => format!("({rel} {} {v})", render(&c)),
            (_, false) => format!("({rel} {v} {})", render(&c)),
        };
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (v, k) in &t.coeffs {
        if k.is_positive() {
            pos.push((v.clone(), k.clone()));
        } else {
            neg.push((v.clone(), -k.clone()));
        }
    }
    let (cpos, cneg) = if t.constant.is_positive() {
        (Some(t.constant.clone()), None)
    } else if t.constant.is_negative() {
        (None, Some(-t.constant.clone()))
    } else {
        (None, None)
    };
    // term = rhs - lhs
    format!("({rel} {} {})", side(&neg, cneg), side(&pos, cpos))
}

impl<S: Scalar> fmt::Display for LinearTerm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<(String, S)> = self.coeffs.iter().map(|(v, c)| (v.clone(), c.clone())).collect();
        let c = (!self.constant.is_zero()).then(|| self.constant.clone());
        f.write_str(&side(&parts, c))
    }
}

impl<S: Scalar> fmt::Display for Atom<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&atom_sexpr(self))
    }
}

impl<S: Scalar> fmt::Display for Formula<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // No literal booleans in the grammar; these parse back to True/False.
            Formula::True => write!(f, "(<= 0 0)"),
            Formula::False => write!(f, "(< 0 0)"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::And(fs) | Formula::Or(fs) => {
                let op = if matches!(self, Formula::And(_)) { "and" } else { "or" };
                write!(f, "({op}")?;
                for g in fs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::Exists(vs, g) => write!(f, "(exists ({}) {g})", vs.join(" ")),
            Formula::Forall(vs, g) => write!(f, "(forall ({}) {g})", vs.join(" ")),
        }
    }
}

impl<S: Scalar> fmt::Display for Problem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {}", self.theory.name())?;
        writeln!(
            f,
            "vars x: {} ; y: {}",
            self.partition.x.join(" "),
            self.partition.y.join(" ")
        )?;
        writeln!(f, "formula {}", self.formula)
    }
}
