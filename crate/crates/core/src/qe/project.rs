//! Fourier-Motzkin projection honoring strictness.

use super::cell::Cell;
use crate::scalar::Scalar;

/// Next variable to eliminate among those accepted by `allowed`: one that
/// occurs in an equation if possible, otherwise the one whose elimination
/// creates the fewest new inequalities.
pub(crate) fn choose_var<S: Scalar>(c: &Cell<S>, allowed: impl Fn(usize) -> bool) -> Option<usize> {
    for e in &c.eqs {
        if let Some(j) = (0..c.arity).find(|&j| allowed(j) && !e.coeffs[j].is_zero()) {
            return Some(j);
        }
    }
    let mut best: Option<(i64, usize)> = None;
    for j in (0..c.arity).filter(|&j| allowed(j)) {
        let (mut lo, mut hi) = (0i64, 0i64);
        for e in c.strict.iter().chain(&c.weak) {
            if e.coeffs[j].is_positive() {
                lo += 1;
            } else if e.coeffs[j].is_negative() {
                hi += 1;
            }
        }
        if lo + hi == 0 {
            continue;
        }
        let score = lo * hi - lo - hi;
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, j));
        }
    }
    best.map(|(_, j)| j)
}

/// Removes variable `j` from a simplified cell, returning the simplified
/// projection, or `None` if the projection (hence the cell) is empty.
pub(crate) fn eliminate<S: Scalar>(c: &Cell<S>, j: usize) -> Option<Cell<S>> {
    if let Some(pos) = c.eqs.iter().position(|e| !e.coeffs[j].is_zero()) {
        let eq = c.eqs[pos].clone();
        let mut out = c.map_exprs(c.arity, |e| e.eliminate_with(j, &eq));
        out.eqs.remove(pos);
        return out.simplify();
    }
    let mut out = Cell::universe(c.arity);
    out.eqs = c.eqs.clone();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (strict, e) in c
        .strict
        .iter()
        .map(|e| (true, e))
        .chain(c.weak.iter().map(|e| (false, e)))
    {
        let a = &e.coeffs[j];
        if a.is_positive() {
            lower.push((strict, e));
        } else if a.is_negative() {
            upper.push((strict, e));
        } else if strict {
            out.strict.push(e.clone());
        } else {
            out.weak.push(e.clone());
        }
    }
    for (sl, l) in &lower {
        for (su, u) in &upper {
            let combo = l.scale(&-u.coeffs[j].clone()).add(&u.scale(&l.coeffs[j]));
            if *sl || *su {
                out.strict.push(combo);
            } else {
                out.weak.push(combo);
            }
        }
    }
    out.simplify()
}

/// Runs elimination to the end. Each step records the eliminated variable
/// and the system it was eliminated from. `None` if the cell is empty.
pub(crate) fn eliminate_all<S: Scalar>(c: &Cell<S>) -> Option<Vec<(usize, Cell<S>)>> {
    let mut cur = c.simplify()?;
    let mut steps = Vec::new();
    while let Some(j) = choose_var(&cur, |_| true) {
        let next = eliminate(&cur, j)?;
        steps.push((j, cur));
        cur = next;
    }
    Some(steps)
}

pub(crate) fn is_empty<S: Scalar>(c: &Cell<S>) -> bool {
    let Some(mut cur) = c.simplify() else {
        return true;
    };
    while let Some(j) = choose_var(&cur, |_| true) {
        match eliminate(&cur, j) {
            Some(next) => cur = next,
            None => return true,
        }
    }
    false
}

/// Projects the variables in `vars` out of a cell (columns stay in place
/// with zero coefficients). `None` if empty.
pub(crate) fn project_cell<S: Scalar>(c: &Cell<S>, vars: &[usize]) -> Option<Cell<S>> {
    let mut cur = c.simplify()?;
    while let Some(j) = choose_var(&cur, |j| vars.contains(&j)) {
        cur = eliminate(&cur, j)?;
    }
    Some(cur)
}

/// Extends a point satisfying the last system of `steps` to one satisfying
/// the first, choosing each eliminated coordinate in reverse order.
pub(crate) fn back_substitute<S: Scalar>(steps: &[(usize, Cell<S>)], point: &mut [S]) {
    for (j, sys) in steps.iter().rev() {
        let j = *j;
        point[j] = S::zero();
        let mut lo: Option<(S, bool)> = None;
        let mut hi: Option<(S, bool)> = None;
        let mut fixed = None;
        for (rel, e) in sys.constraints() {
            let a = e.coeffs[j].clone();
            if a.is_zero() {
                continue;
            }
            let bound = -e.eval(point) / a.clone();
            let strict = rel == crate::formula::Relation::Lt;
            if rel == crate::formula::Relation::Eq {
                fixed = Some(bound);
                break;
            }
            let slot = if a.is_positive() { &mut lo } else { &mut hi };
            let tighter = match slot {
                None => true,
                Some((b, s)) => {
                    if a.is_positive() {
                        bound > *b || (bound == *b && strict && !*s)
                    } else {
                        bound < *b || (bound == *b && strict && !*s)
                    }
                }
            };
            if tighter {
                *slot = Some((bound, strict));
            }
        }
        point[j] = match fixed {
            Some(v) => v,
            None => pick(lo, hi),
        };
    }
}

fn admits<S: Scalar>(v: &S, lo: &Option<(S, bool)>, hi: &Option<(S, bool)>) -> bool {
    let above = match lo {
        None => true,
        Some((b, s)) => v > b || (!s && v == b),
    };
    let below = match hi {
        None => true,
        Some((b, s)) => v < b || (!s && v == b),
    };
    above && below
}

/// A value in the interval: the integer closest to zero if there is one,
/// else the midpoint.
fn pick<S: Scalar>(lo: Option<(S, bool)>, hi: Option<(S, bool)>) -> S {
    let zero = S::zero();
    if admits(&zero, &lo, &hi) {
        return zero;
    }
    let candidate = match (&lo, &hi) {
        (Some((b, s)), _) if b.is_positive() || b.is_zero() => {
            if *s || !b.is_integer() {
                b.floor() + S::one()
            } else {
                b.clone()
            }
        }
        (_, Some((b, s))) => {
            if *s || !b.is_integer() {
                b.ceil() - S::one()
            } else {
                b.clone()
            }
        }
        _ => zero,
    };
    if admits(&candidate, &lo, &hi) {
        return candidate;
    }
    match (lo, hi) {
        (Some((a, _)), Some((b, _))) => (a + b) / S::two(),
        (Some((a, _)), None) => a + S::one(),
        (None, Some((b, _))) => b - S::one(),
        (None, None) => S::zero(),
    }
}
