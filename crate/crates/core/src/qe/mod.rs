//! Quantifier elimination into unions of linear cells.

mod cell;
mod project;

pub use cell::{Cell, LinExpr, SemilinearSet};
pub(crate) use project::{back_substitute, eliminate_all, is_empty as cell_is_empty, project_cell};

use crate::error::{Error, Result};
use crate::formula::{Formula, Problem, Relation};
use crate::polyhedra;
use crate::scalar::Scalar;

/// Quantifier-free description of the problem's formula over the
/// partition's variables (x first, then y).
pub fn eliminate_quantifiers<S: Scalar>(problem: &Problem<S>) -> Result<SemilinearSet<S>> {
    set_of(&problem.formula, &problem.partition.variables())
}

/// Disjunctive normal form of a quantifier-free formula, negations pushed
/// into the atoms, inconsistent cells dropped.
pub fn to_cells<S: Scalar>(formula: &Formula<S>, vars: &[String]) -> Result<SemilinearSet<S>> {
    let cells = dnf(formula, false, vars)?;
    Ok(SemilinearSet::from_cells(vars.to_vec(), cells))
}

/// Existentially projects `var` out of `set`, removing it from the ambient.
pub fn project<S: Scalar>(set: &SemilinearSet<S>, var: &str) -> Result<SemilinearSet<S>> {
    let i = set
        .vars
        .iter()
        .position(|v| v == var)
        .ok_or_else(|| Error::UndeclaredVariable(var.to_string()))?;
    let n = set.arity();
    let map: Vec<usize> = (0..n).map(|j| if j < i { j } else { j.saturating_sub(1) }).collect();
    let mut vars = set.vars.clone();
    vars.remove(i);
    let mut out = SemilinearSet::empty(vars);
    for c in &set.cells {
        if let Some(p) = project_cell(c, &[i]) {
            if !cell_is_empty(&p) {
                out.push(p.remap(&map, n - 1));
            }
        }
    }
    Ok(out)
}

fn set_of<S: Scalar>(f: &Formula<S>, vars: &[String]) -> Result<SemilinearSet<S>> {
    if f.is_quantifier_free() {
        return to_cells(f, vars);
    }
    match f {
        Formula::And(fs) => {
            let mut acc = SemilinearSet::universe(vars.to_vec());
            for g in fs {
                acc = polyhedra::intersect(&acc, &set_of(g, vars)?)?;
            }
            Ok(acc)
        }
        Formula::Or(fs) => {
            let mut acc = SemilinearSet::empty(vars.to_vec());
            for g in fs {
                acc = polyhedra::union(&acc, &set_of(g, vars)?)?;
            }
            Ok(acc)
        }
        Formula::Not(g) => polyhedra::complement(&set_of(g, vars)?),
        Formula::Exists(bound, body) => exists(bound, body, vars, false),
        Formula::Forall(bound, body) => exists(bound, body, vars, true),
        Formula::True | Formula::False | Formula::Atom(_) => unreachable!("quantifier-free"),
    }
}

/// `exists bound. body`, or with `universal`, `not exists bound. not body`.
fn exists<S: Scalar>(
    bound: &[String],
    body: &Formula<S>,
    vars: &[String],
    universal: bool,
) -> Result<SemilinearSet<S>> {
    let mut ext = vars.to_vec();
    ext.extend(bound.iter().cloned());
    let mut s = set_of(body, &ext)?;
    if universal {
        s = polyhedra::complement(&s)?;
    }
    for v in bound {
        s = project(&s, v)?;
    }
    if universal {
        s = polyhedra::complement(&s)?;
    }
    Ok(s)
}

fn atom_cells<S: Scalar>(relation: Relation, e: LinExpr<S>, negated: bool) -> Vec<Cell<S>> {
    match (relation, negated) {
        (r, false) => vec![Cell::single(r, e)],
        (Relation::Eq, true) => vec![
            Cell::single(Relation::Lt, e.clone()),
            Cell::single(Relation::Lt, e.neg()),
        ],
        (Relation::Lt, true) => vec![Cell::single(Relation::Le, e.neg())],
        (Relation::Le, true) => vec![Cell::single(Relation::Lt, e.neg())],
    }
}

fn dnf<S: Scalar>(f: &Formula<S>, negated: bool, vars: &[String]) -> Result<Vec<Cell<S>>> {
    let n = vars.len();
    Ok(match (f, negated) {
        (Formula::True, false) | (Formula::False, true) => vec![Cell::universe(n)],
        (Formula::True, true) | (Formula::False, false) => vec![],
        (Formula::Atom(a), _) => {
            let e = LinExpr::from_term(&a.term, vars)?;
            atom_cells(a.relation, e, negated)
                .into_iter()
                .filter_map(|c| c.simplify())
                .collect()
        }
        (Formula::Not(g), _) => dnf(g, !negated, vars)?,
        (Formula::And(fs), false) | (Formula::Or(fs), true) => {
            let mut acc = vec![Cell::universe(n)];
            for g in fs {
                let parts = dnf(g, negated, vars)?;
                let mut next = Vec::new();
                for a in &acc {
                    for b in &parts {
                        if let Some(c) = a.conj(b).simplify() {
                            if !cell_is_empty(&c) && !next.contains(&c) {
                                next.push(c);
                            }
                        }
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        (Formula::Or(fs), false) | (Formula::And(fs), true) => {
            let mut acc = Vec::new();
            for g in fs {
                for c in dnf(g, negated, vars)? {
                    if !cell_is_empty(&c) && !acc.contains(&c) {
                        acc.push(c);
                    }
                }
            }
            acc
        }
        (Formula::Exists(..) | Formula::Forall(..), _) => return Err(Error::Quantified),
    })
}
