use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, LinearTerm, Relation};
use crate::scalar::{coprime_scale, Scalar};

/// Dense affine expression `coeffs . p + constant` over an ambient variable
/// list fixed by the enclosing set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinExpr<S = BigRational> {
    pub coeffs: Vec<S>,
    pub constant: S,
}

impl<S: Scalar> LinExpr<S> {
    pub fn new(coeffs: Vec<S>, constant: S) -> Self {
        LinExpr { coeffs, constant }
    }

    pub fn zero(n: usize) -> Self {
        LinExpr::new(vec![S::zero(); n], S::zero())
    }

    /// `p[i] - value`.
    pub fn var_minus(n: usize, i: usize, value: S) -> Self {
        let mut e = LinExpr::zero(n);
        e.coeffs[i] = S::one();
        e.constant = -value;
        e
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, p: &[S]) -> S {
        self.coeffs
            .iter()
            .zip(p)
            .fold(self.constant.clone(), |acc, (c, x)| acc + c.clone() * x.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        LinExpr {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            constant: self.constant.clone() + o.constant.clone(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        LinExpr {
            coeffs: self.coeffs.iter().map(|a| a.clone() * k.clone()).collect(),
            constant: self.constant.clone() * k.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Replaces variable `i` using the equation `eq = 0`, which must
    /// mention `i`. The result does not mention `i`.
    pub fn eliminate_with(&self, i: usize, eq: &LinExpr<S>) -> Self {
        if self.coeffs[i].is_zero() {
            return self.clone();
        }
        let f = self.coeffs[i].clone() / eq.coeffs[i].clone();
        let mut out = self.sub(&eq.scale(&f));
        out.coeffs[i] = S::zero();
        out
    }

    /// Scaled so that the coefficients are coprime integers (positive factor).
    pub fn normalized(&self) -> Self {
        match coprime_scale(&self.coeffs) {
            Some(k) => self.scale(&k),
            None => self.clone(),
        }
    }

    /// Like [`normalized`](Self::normalized), then signed so that the first
    /// non-zero coefficient is positive.
    pub fn normalized_eq(&self) -> Self {
        let e = self.normalized();
        match e.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => e.neg(),
            _ => e,
        }
    }

    /// Re-indexes into an ambient of size `n`: old column `i` moves to `map[i]`.
    pub fn remap(&self, map: &[usize], n: usize) -> Self {
        let mut coeffs = vec![S::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[map[i]] = coeffs[map[i]].clone() + c.clone();
        }
        LinExpr::new(coeffs, self.constant.clone())
    }

    /// Appends `k` zero columns.
    pub fn extend(&self, k: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(std::iter::repeat_n(S::zero(), k));
        LinExpr::new(coeffs, self.constant.clone())
    }

    pub fn truncate(&self, n: usize) -> Self {
        debug_assert!(self.coeffs[n..].iter().all(|c| c.is_zero()));
        LinExpr::new(self.coeffs[..n].to_vec(), self.constant.clone())
    }

    pub fn from_term(term: &LinearTerm<S>, vars: &[String]) -> Result<Self> {
        let mut e = LinExpr::zero(vars.len());
        for (v, c) in &term.coeffs {
            let i = vars
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UndeclaredVariable(v.clone()))?;
            e.coeffs[i] = c.clone();
        }
        e.constant = term.constant.clone();
        Ok(e)
    }

    pub fn to_term(&self, vars: &[String]) -> LinearTerm<S> {
        LinearTerm {
            coeffs: self
                .coeffs
                .iter()
                .zip(vars)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, v)| (v.clone(), c.clone()))
                .collect(),
            constant: self.constant.clone(),
        }
    }
}

/// A conjunction of linear constraints: `e = 0`, `e > 0`, `e >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell<S = BigRational> {
    pub arity: usize,
    pub eqs: Vec<LinExpr<S>>,
    pub strict: Vec<LinExpr<S>>,
    pub weak: Vec<LinExpr<S>>,
}

impl<S: Scalar> Cell<S> {
    pub fn universe(arity: usize) -> Self {
        Cell {
            arity,
            eqs: Vec::new(),
            strict: Vec::new(),
            weak: Vec::new(),
        }
    }

    pub fn single(relation: Relation, e: LinExpr<S>) -> Self {
        let mut c = Cell::universe(e.arity());
        c.push(relation, e);
        c
    }

    pub fn push(&mut self, relation: Relation, e: LinExpr<S>) {
        debug_assert_eq!(e.arity(), self.arity);
        match relation {
            Relation::Eq => self.eqs.push(e),
            Relation::Lt => self.strict.push(e),
            Relation::Le => self.weak.push(e),
        }
    }

    pub fn with(mut self, relation: Relation, e: LinExpr<S>) -> Self {
        self.push(relation, e);
        self
    }

    pub fn constraints(&self) -> impl Iterator<Item = (Relation, &LinExpr<S>)> {
        self.eqs
            .iter()
            .map(|e| (Relation::Eq, e))
            .chain(self.strict.iter().map(|e| (Relation::Lt, e)))
            .chain(self.weak.iter().map(|e| (Relation::Le, e)))
    }

    pub fn constraint_count(&self) -> usize {
        self.eqs.len() + self.strict.len() + self.weak.len()
    }

    pub fn is_empty_syntax(&self) -> bool {
        self.constraint_count() == 0
    }

    pub fn conj(&self, other: &Cell<S>) -> Cell<S> {
        debug_assert_eq!(self.arity, other.arity);
        let mut c = self.clone();
        c.eqs.extend(other.eqs.iter().cloned());
        c.strict.extend(other.strict.iter().cloned());
        c.weak.extend(other.weak.iter().cloned());
        c
    }

    pub fn contains(&self, p: &[S]) -> bool {
        self.constraints().all(|(r, e)| r.holds(&e.eval(p)))
    }

    /// Membership in the topological closure (assuming the cell is non-empty).
    pub fn closure_contains(&self, p: &[S]) -> bool {
        self.constraints().all(|(r, e)| {
            let v = e.eval(p);
            match r {
                Relation::Eq => v.is_zero(),
                _ => !v.is_negative(),
            }
        })
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.constraints().any(|(_, e)| !e.coeffs[i].is_zero())
    }

    pub fn map_exprs(&self, arity: usize, f: impl Fn(&LinExpr<S>) -> LinExpr<S>) -> Cell<S> {
        Cell {
            arity,
            eqs: self.eqs.iter().map(&f).collect(),
            strict: self.strict.iter().map(&f).collect(),
            weak: self.weak.iter().map(&f).collect(),
        }
    }

    pub fn remap(&self, map: &[usize], n: usize) -> Cell<S> {
        self.map_exprs(n, |e| e.remap(map, n))
    }

    pub fn extend(&self, k: usize) -> Cell<S> {
        self.map_exprs(self.arity + k, |e| e.extend(k))
    }

    /// Canonical, cheaply simplified form; `None` when a contradiction is
    /// detected syntactically.
    ///
    /// Constant constraints are folded; constraints are normalized; parallel
    /// inequalities keep only the tightest; opposing weak pairs that pinch
    /// become equations.
    pub fn simplify(&self) -> Option<Cell<S>> {
        let mut eqs: BTreeMap<Vec<S>, S> = BTreeMap::new();
        let mut ineqs: BTreeMap<Vec<S>, (S, bool)> = BTreeMap::new();

        let add_eq = |eqs: &mut BTreeMap<Vec<S>, S>, e: &LinExpr<S>| -> bool {
            if e.is_constant() {
                return e.constant.is_zero();
            }
            let n = e.normalized_eq();
            match eqs.get(&n.coeffs) {
                Some(c) => *c == n.constant,
                None => {
                    eqs.insert(n.coeffs, n.constant);
                    true
                }
            }
        };

        for e in &self.eqs {
            if !add_eq(&mut eqs, e) {
                return None;
            }
        }
        for (strict, e) in self
            .strict
            .iter()
            .map(|e| (true, e))
            .chain(self.weak.iter().map(|e| (false, e)))
        {
            if e.is_constant() {
                let ok = if strict {
                    e.constant.is_positive()
                } else {
                    !e.constant.is_negative()
                };
                if !ok {
                    return None;
                }
                continue;
            }
            let n = e.normalized();
            match ineqs.get_mut(&n.coeffs) {
                Some((c, s)) => {
                    if n.constant < *c {
                        *c = n.constant;
                        *s = strict;
                    } else if n.constant == *c {
                        *s = *s || strict;
                    }
                }
                None => {
                    ineqs.insert(n.coeffs, (n.constant, strict));
                }
            }
        }

        // Opposing pairs: t + c1 >= 0 and -t + c2 >= 0 bound t in [-c1, c2].
        let keys: Vec<Vec<S>> = ineqs.keys().cloned().collect();
        for k in keys {
            let neg: Vec<S> = k.iter().map(|c| -c.clone()).collect();
            if neg <= k {
                continue;
            }
            let (Some((c1, s1)), Some((c2, s2))) = (ineqs.get(&k).cloned(), ineqs.get(&neg).cloned()) else {
                continue;
            };
            let width = c1.clone() + c2;
            if width.is_negative() || (width.is_zero() && (s1 || s2)) {
                return None;
            }
            if width.is_zero() {
                ineqs.remove(&k);
                ineqs.remove(&neg);
                if !add_eq(&mut eqs, &LinExpr::new(k, c1)) {
                    return None;
                }
            }
        }

        // Inequalities parallel to an equation become constant checks.
        let mut strict = Vec::new();
        let mut weak = Vec::new();
        for (k, (c, s)) in ineqs {
            let lead_neg = k.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
            let eq_key: Vec<S> = if lead_neg {
                k.iter().map(|x| -x.clone()).collect()
            } else {
                k.clone()
            };
            if let Some(ce) = eqs.get(&eq_key) {
                // On the equation, t = -ce (or -t = -ce when signs differ).
                let value = if lead_neg {
                    c.clone() + ce.clone()
                } else {
                    c.clone() - ce.clone()
                };
                let ok = if s { value.is_positive() } else { !value.is_negative() };
                if !ok {
                    return None;
                }
                continue;
            }
            let e = LinExpr::new(k, c);
            if s {
                strict.push(e);
            } else {
                weak.push(e);
            }
        }
        Some(Cell {
            arity: self.arity,
            eqs: eqs.into_iter().map(|(k, c)| LinExpr::new(k, c)).collect(),
            strict,
            weak,
        })
    }

    pub fn to_formula(&self, vars: &[String]) -> Formula<S> {
        let mut kids: Vec<Formula<S>> = self
            .constraints()
            .map(|(r, e)| Atom::from_term(e.to_term(vars), r))
            .filter(|f| *f != Formula::True)
            .collect();
        if kids.contains(&Formula::False) {
            return Formula::False;
        }
        match kids.len() {
            0 => Formula::True,
            1 => kids.pop().unwrap(),
            _ => Formula::And(kids),
        }
    }
}

/// A finite union of cells over a fixed ordered variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemilinearSet<S = BigRational> {
    pub vars: Vec<String>,
    pub cells: Vec<Cell<S>>,
}

impl<S: Scalar> SemilinearSet<S> {
    pub fn empty(vars: Vec<String>) -> Self {
        SemilinearSet {
            vars,
            cells: Vec::new(),
        }
    }

    pub fn universe(vars: Vec<String>) -> Self {
        let n = vars.len();
        SemilinearSet {
            vars,
            cells: vec![Cell::universe(n)],
        }
    }

    pub fn from_cells(vars: Vec<String>, cells: Vec<Cell<S>>) -> Self {
        let mut s = SemilinearSet {
            vars,
            cells: Vec::new(),
        };
        for c in cells {
            s.push(c);
        }
        s
    }

    /// Adds a cell unless it is syntactically inconsistent or a duplicate.
    pub fn push(&mut self, c: Cell<S>) {
        debug_assert_eq!(c.arity, self.arity());
        if let Some(c) = c.simplify() {
            if !self.cells.contains(&c) {
                self.cells.push(c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn contains(&self, p: &[S]) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    pub fn contains_named(&self, point: &crate::formula::Point<S>) -> Result<bool> {
        let p: Vec<S> = self
            .vars
            .iter()
            .map(|v| point.get(v).cloned().ok_or_else(|| Error::MissingAssignment(v.clone())))
            .collect::<Result<_>>()?;
        Ok(self.contains(&p))
    }

    pub fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::AmbientMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn to_formula(&self) -> Formula<S> {
        let mut kids: Vec<Formula<S>> = self.cells.iter().map(|c| c.to_formula(&self.vars)).collect();
        if kids.contains(&Formula::True) {
            return Formula::True;
        }
        kids.retain(|f| *f != Formula::False);
        match kids.len() {
            0 => Formula::False,
            1 => kids.pop().unwrap(),
            _ => Formula::Or(kids),
        }
    }

    /// Embeds into a larger ambient: column `i` moves to `map[i]`.
    pub fn lift(&self, vars: Vec<String>, map: &[usize]) -> SemilinearSet<S> {
        let n = vars.len();
        SemilinearSet {
            vars,
            cells: self.cells.iter().map(|c| c.remap(map, n)).collect(),
        }
    }

    /// Embeds a set over a subset of `vars` (matched by name).
    pub fn lift_into(&self, vars: &[String]) -> Result<SemilinearSet<S>> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UndeclaredVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        Ok(self.lift(vars.to_vec(), &map))
    }

    /// All distinct constants `c` with an atom `v REL c` (single variable).
    pub fn pinned_constants(&self) -> Vec<S> {
        let mut seen: HashMap<S, ()> = HashMap::new();
        let mut out = Vec::new();
        for c in &self.cells {
            for (_, e) in c.constraints() {
                let nz: Vec<&S> = e.coeffs.iter().filter(|x| !x.is_zero()).collect();
                if let [k] = nz.as_slice() {
                    let v = -e.constant.clone() / (*k).clone();
                    if seen.insert(v.clone(), ()).is_none() {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl<S: Scalar> fmt::Display for SemilinearSet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    fn e(c: &[i64], k: i64) -> LinExpr<Q> {
        LinExpr::new(c.iter().map(|&x| Q::from_int(x)).collect(), Q::from_int(k))
    }

    #[test]
    fn simplify_detects_pinch_and_conflict() {
        let c = Cell::universe(1)
            .with(Relation::Le, e(&[1], 0))
            .with(Relation::Le, e(&[-1], 0));
        let s = c.simplify().unwrap();
        assert_eq!(s.eqs, vec![e(&[1], 0)]);
        assert!(s.weak.is_empty());

        let c = Cell::universe(1)
            .with(Relation::Le, e(&[1], 0))
            .with(Relation::Le, e(&[-1], 0))
            .with(Relation::Lt, e(&[1], 0));
        assert!(c.simplify().is_none());

        let c = Cell::universe(1)
            .with(Relation::Lt, e(&[1], 0))
            .with(Relation::Lt, e(&[-1], 0));
        assert!(c.simplify().is_none());
    }

    #[test]
    fn simplify_keeps_tightest_parallel_bound() {
        let c = Cell::universe(2)
            .with(Relation::Le, e(&[2, 2], -2))
            .with(Relation::Lt, e(&[1, 1], -3))
            .with(Relation::Le, e(&[1, 1], 5));
        let s = c.simplify().unwrap();
        assert_eq!(s.strict, vec![e(&[1, 1], -3)]);
        assert!(s.weak.is_empty());
    }

    #[test]
    fn simplify_checks_inequalities_against_equations() {
        // x = 2 and x > 1: the inequality is redundant.
        let c = Cell::universe(1)
            .with(Relation::Eq, e(&[1], -2))
            .with(Relation::Lt, e(&[1], -1));
        let s = c.simplify().unwrap();
        assert_eq!(s.constraint_count(), 1);
        // x = 2 and -x + 1 > 0 (x < 1): contradiction.
        let c = Cell::universe(1)
            .with(Relation::Eq, e(&[1], -2))
            .with(Relation::Lt, e(&[-1], 1));
        assert!(c.simplify().is_none());
    }

    #[test]
    fn formula_round_trip_names() {
        let vars = vec!["x1".to_string(), "y1".to_string()];
        let c = Cell::universe(2).with(Relation::Lt, e(&[1, -1], 0));
        assert_eq!(c.to_formula(&vars).to_string(), "(< y1 x1)");
    }
}
