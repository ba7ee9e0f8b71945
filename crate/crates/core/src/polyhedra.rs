//! Exact geometry of semilinear sets.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::formula::Relation;
use crate::linalg::{self, Matrix};
use crate::qe::{back_substitute, cell_is_empty, eliminate_all, Cell, LinExpr, SemilinearSet};
use crate::scalar::Scalar;

/// `{ p : every row evaluates to 0 }`, kept in reduced row echelon form
/// (pivot coefficient 1), which makes equality of subspaces structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSubspace<S = BigRational> {
    arity: usize,
    rows: Vec<LinExpr<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> AffineSubspace<S> {
    pub fn full(arity: usize) -> Self {
        AffineSubspace {
            arity,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// `None` when the equations are inconsistent.
    pub fn from_equations(arity: usize, eqs: &[LinExpr<S>]) -> Option<Self> {
        let mut m: Matrix<S> = eqs
            .iter()
            .map(|e| {
                let mut r = e.coeffs.clone();
                r.push(e.constant.clone());
                r
            })
            .collect();
        let pivots = linalg::rref(&mut m, arity);
        if m.len() > pivots.len() {
            return None;
        }
        let rows = m
            .into_iter()
            .map(|mut r| {
                let c = r.pop().unwrap();
                LinExpr::new(r, c)
            })
            .collect();
        Some(AffineSubspace { arity, rows, pivots })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.arity - self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows with pivot coefficient 1.
    pub fn rows(&self) -> &[LinExpr<S>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Rows scaled to coprime integer coefficients (pivots stay positive).
    pub fn equations(&self) -> Vec<LinExpr<S>> {
        self.rows.iter().map(|r| r.normalized()).collect()
    }

    pub fn contains_point(&self, p: &[S]) -> bool {
        self.rows.iter().all(|r| r.eval(p).is_zero())
    }

    /// Eliminates the pivot columns of `e` using the rows; two expressions
    /// agree on the subspace iff their reductions are equal.
    pub fn reduce(&self, e: &LinExpr<S>) -> LinExpr<S> {
        let mut out = e.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out.coeffs[p].is_zero() {
                let f = out.coeffs[p].clone();
                out = out.sub(&row.scale(&f));
            }
        }
        out
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &AffineSubspace<S>) -> bool {
        other.rows.iter().all(|r| {
            let red = self.reduce(r);
            red.is_constant() && red.constant.is_zero()
        })
    }

    pub fn intersect(&self, other: &AffineSubspace<S>) -> Option<AffineSubspace<S>> {
        let mut eqs = self.rows.clone();
        eqs.extend(other.rows.iter().cloned());
        AffineSubspace::from_equations(self.arity, &eqs)
    }

    pub fn with_equation(&self, e: &LinExpr<S>) -> Option<AffineSubspace<S>> {
        let mut eqs = self.rows.clone();
        eqs.push(e.clone());
        AffineSubspace::from_equations(self.arity, &eqs)
    }

    pub fn to_cell(&self) -> Cell<S> {
        let mut c = Cell::universe(self.arity);
        c.eqs = self.equations();
        c
    }

    pub fn to_set(&self, vars: &[String]) -> SemilinearSet<S> {
        SemilinearSet::from_cells(vars.to_vec(), vec![self.to_cell()])
    }

    /// Basis of the direction space.
    pub fn directions(&self) -> Vec<Vec<S>> {
        let m: Matrix<S> = self.rows.iter().map(|r| r.coeffs.clone()).collect();
        linalg::nullspace(&m, self.arity)
    }

    /// The point with every free coordinate zero.
    pub fn base_point(&self) -> Vec<S> {
        let mut p = vec![S::zero(); self.arity];
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            p[c] = -row.constant.clone();
        }
        p
    }
}

/// `normal . p = offset`, canonical: coprime integer normal whose first
/// non-zero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane<S = BigRational> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> Hyperplane<S> {
    /// The zero set of `e`, canonicalized.
    pub fn from_expr(e: &LinExpr<S>) -> Result<Self> {
        if e.is_constant() {
            return Err(Error::DegenerateHyperplane);
        }
        let n = e.normalized_eq();
        Ok(Hyperplane {
            normal: n.coeffs,
            offset: -n.constant,
        })
    }

    /// `normal . p - offset`.
    pub fn expr(&self) -> LinExpr<S> {
        LinExpr::new(self.normal.clone(), -self.offset.clone())
    }

    pub fn value(&self, p: &[S]) -> S {
        self.expr().eval(p)
    }

    pub fn arity(&self) -> usize {
        self.normal.len()
    }

    /// Coefficients on the first `x_len` variables.
    pub fn normal_x(&self, x_len: usize) -> &[S] {
        &self.normal[..x_len]
    }

    pub fn normal_y(&self, x_len: usize) -> &[S] {
        &self.normal[x_len..]
    }
}

pub fn is_empty<S: Scalar>(cell: &Cell<S>) -> bool {
    cell_is_empty(cell)
}

pub fn set_is_empty<S: Scalar>(set: &SemilinearSet<S>) -> bool {
    set.cells.iter().all(cell_is_empty)
}

/// Indices into `cell.weak` of the inequalities that hold with equality
/// everywhere on the (non-empty) cell.
fn implied_equalities<S: Scalar>(cell: &Cell<S>) -> Vec<usize> {
    (0..cell.weak.len())
        .filter(|&i| cell_is_empty(&cell.clone().with(Relation::Lt, cell.weak[i].clone())))
        .collect()
}

fn nonempty_simplified<S: Scalar>(cell: &Cell<S>) -> Result<Cell<S>> {
    match cell.simplify() {
        Some(c) if !cell_is_empty(&c) => Ok(c),
        _ => Err(Error::EmptyCell),
    }
}

pub fn affine_hull<S: Scalar>(cell: &Cell<S>) -> Result<AffineSubspace<S>> {
    let c = nonempty_simplified(cell)?;
    let mut eqs = c.eqs.clone();
    for i in implied_equalities(&c) {
        eqs.push(c.weak[i].clone());
    }
    AffineSubspace::from_equations(c.arity, &eqs).ok_or_else(|| Error::Invariant("inconsistent hull".into()))
}

/// A point of the relative interior: equations hold, and every inequality
/// that is not an implied equality holds strictly.
pub fn sample_interior<S: Scalar>(cell: &Cell<S>) -> Result<Vec<S>> {
    let c = nonempty_simplified(cell)?;
    let implied = implied_equalities(&c);
    let mut inner = Cell::universe(c.arity);
    inner.eqs = c.eqs.clone();
    inner.strict = c.strict.clone();
    for (i, w) in c.weak.iter().enumerate() {
        if implied.contains(&i) {
            inner.eqs.push(w.clone());
        } else {
            inner.strict.push(w.clone());
        }
    }
    let steps = eliminate_all(&inner).ok_or_else(|| Error::Invariant("relative interior is empty".into()))?;
    let mut p = vec![S::zero(); c.arity];
    back_substitute(&steps, &mut p);
    if !inner.contains(&p) {
        return Err(Error::Invariant("sampled point outside cell".into()));
    }
    Ok(p)
}

pub fn cell_dimension<S: Scalar>(cell: &Cell<S>) -> i64 {
    affine_hull(cell).map(|h| h.dim() as i64).unwrap_or(-1)
}

/// Largest cell dimension; `-1` for the empty set.
pub fn dimension<S: Scalar>(set: &SemilinearSet<S>) -> i64 {
    set.cells.iter().map(cell_dimension).max().unwrap_or(-1).max(-1)
}

/// Largest dimension among the cells whose closure contains `p`.
pub fn local_dimension<S: Scalar>(set: &SemilinearSet<S>, p: &[S]) -> i64 {
    set.cells
        .iter()
        .filter(|c| c.closure_contains(p))
        .map(cell_dimension)
        .max()
        .unwrap_or(-1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
    SymDiff,
}

pub fn combine<S: Scalar>(op: BoolOp, a: &SemilinearSet<S>, b: &SemilinearSet<S>) -> Result<SemilinearSet<S>> {
    match op {
        BoolOp::Union => union(a, b),
        BoolOp::Intersect => intersect(a, b),
        BoolOp::Difference => difference(a, b),
        BoolOp::SymDiff => union(&difference(a, b)?, &difference(b, a)?),
    }
}

pub fn union<S: Scalar>(a: &SemilinearSet<S>, b: &SemilinearSet<S>) -> Result<SemilinearSet<S>> {
    a.check_same_ambient(b)?;
    let mut out = a.clone();
    for c in &b.cells {
        out.push(c.clone());
    }
    Ok(out)
}

pub fn intersect<S: Scalar>(a: &SemilinearSet<S>, b: &SemilinearSet<S>) -> Result<SemilinearSet<S>> {
    a.check_same_ambient(b)?;
    let mut out = SemilinearSet::empty(a.vars.clone());
    for ca in &a.cells {
        for cb in &b.cells {
            if let Some(c) = ca.conj(cb).simplify() {
                if !cell_is_empty(&c) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

fn negations<S: Scalar>(relation: Relation, e: &LinExpr<S>) -> Vec<(Relation, LinExpr<S>)> {
    match relation {
        Relation::Eq => vec![(Relation::Lt, e.clone()), (Relation::Lt, e.neg())],
        Relation::Lt => vec![(Relation::Le, e.neg())],
        Relation::Le => vec![(Relation::Lt, e.neg())],
    }
}

/// `a \ b` as pairwise disjoint cells.
fn subtract_cell<S: Scalar>(a: &Cell<S>, b: &Cell<S>) -> Vec<Cell<S>> {
    if cell_is_empty(&a.conj(b)) {
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    let mut prefix = a.clone();
    for (rel, e) in b.constraints() {
        for (nr, ne) in negations(rel, e) {
            if let Some(c) = prefix.clone().with(nr, ne).simplify() {
                if !cell_is_empty(&c) {
                    out.push(c);
                }
            }
        }
        prefix.push(rel, e.clone());
    }
    out
}

pub fn difference<S: Scalar>(a: &SemilinearSet<S>, b: &SemilinearSet<S>) -> Result<SemilinearSet<S>> {
    a.check_same_ambient(b)?;
    let mut cells = a.cells.clone();
    for cb in &b.cells {
        cells = cells.iter().flat_map(|ca| subtract_cell(ca, cb)).collect();
        if cells.is_empty() {
            break;
        }
    }
    Ok(SemilinearSet::from_cells(a.vars.clone(), cells))
}

pub fn complement<S: Scalar>(a: &SemilinearSet<S>) -> Result<SemilinearSet<S>> {
    difference(&SemilinearSet::universe(a.vars.clone()), a)
}

/// `a ⊆ b`.
pub fn is_subset<S: Scalar>(a: &SemilinearSet<S>, b: &SemilinearSet<S>) -> Result<bool> {
    Ok(set_is_empty(&difference(a, b)?))
}

pub fn equivalent<S: Scalar>(a: &SemilinearSet<S>, b: &SemilinearSet<S>) -> Result<bool> {
    Ok(is_subset(a, b)? && is_subset(b, a)?)
}

/// Splits every cell by the sign of `e` (negative, zero, positive), keeping
/// non-empty parts. With `open_only` the zero part is dropped.
fn split_cells<S: Scalar>(cells: Vec<Cell<S>>, e: &LinExpr<S>, open_only: bool) -> Vec<Cell<S>> {
    let mut sides = vec![(Relation::Lt, e.neg())];
    if !open_only {
        sides.push((Relation::Eq, e.clone()));
    }
    sides.push((Relation::Lt, e.clone()));
    let mut out = Vec::new();
    for c in cells {
        for (r, s) in &sides {
            if let Some(part) = c.clone().with(*r, s.clone()).simplify() {
                if !cell_is_empty(&part) {
                    out.push(part);
                }
            }
        }
    }
    out
}

/// Sign-condition cells of the hyperplanes inside `carrier`; they partition it.
pub fn arrangement<S: Scalar>(hyperplanes: &[Hyperplane<S>], carrier: &AffineSubspace<S>) -> Vec<Cell<S>> {
    hyperplanes
        .iter()
        .fold(vec![carrier.to_cell()], |cells, h| split_cells(cells, &h.expr(), false))
}

/// The cells of `base` on which no hyperplane vanishes (the open chambers).
pub fn open_arrangement<S: Scalar>(hyperplanes: &[Hyperplane<S>], base: &Cell<S>) -> Vec<Cell<S>> {
    let start = if cell_is_empty(base) {
        vec![]
    } else {
        vec![base.clone()]
    };
    hyperplanes
        .iter()
        .fold(start, |cells, h| split_cells(cells, &h.expr(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::qe::to_cells;

    type Q = BigRational;

    fn set(vars: &str, f: &str) -> SemilinearSet<Q> {
        let p = parse(&format!("theory doag\nvars {vars}\nformula {f}")).unwrap();
        to_cells(&p.formula, &p.partition.variables()).unwrap()
    }

    fn plane(f: &str) -> SemilinearSet<Q> {
        set("x: x1 ; y: y1", f)
    }

    fn e(c: &[i64], k: i64) -> LinExpr<Q> {
        LinExpr::new(c.iter().map(|&x| Q::from_int(x)).collect(), Q::from_int(k))
    }

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn emptiness_examples() {
        assert!(is_empty(
            &Cell::universe(1)
                .with(Relation::Lt, e(&[1], 0))
                .with(Relation::Lt, e(&[-1], 0))
        ));
        assert!(!is_empty(
            &Cell::universe(2)
                .with(Relation::Eq, e(&[1, -1], 0))
                .with(Relation::Lt, e(&[1, 0], 0))
        ));
        assert!(is_empty(
            &Cell::universe(1)
                .with(Relation::Le, e(&[1], 0))
                .with(Relation::Le, e(&[-1], 0))
                .with(Relation::Lt, e(&[1], 0))
        ));
    }

    #[test]
    fn hull_examples() {
        let s = set("x: x1 x2 ; y: y1", "(and (= x2 (+ x1 y1)) (< y1 x1))");
        let h = affine_hull(&s.cells[0]).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.equations(), vec![e(&[1, -1, 1], 0)]);
        assert!(affine_hull(&plane("(and (< 0 x1) (< 0 y1))").cells[0])
            .unwrap()
            .is_full());
        let pinch = Cell::universe(1)
            .with(Relation::Le, e(&[1], 0))
            .with(Relation::Le, e(&[-1], 0));
        assert_eq!(affine_hull(&pinch).unwrap().equations(), vec![e(&[1], 0)]);
    }

    #[test]
    fn hull_finds_implied_equalities_across_constraints() {
        // x >= y, y >= z, z >= x forces x = y = z.
        let c = Cell::universe(3)
            .with(Relation::Le, e(&[1, -1, 0], 0))
            .with(Relation::Le, e(&[0, 1, -1], 0))
            .with(Relation::Le, e(&[-1, 0, 1], 0));
        assert_eq!(affine_hull(&c).unwrap().dim(), 1);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&plane("(= x1 y1)")), 1);
        assert_eq!(dimension(&plane("(< y1 x1)")), 2);
        assert_eq!(dimension(&plane("(< x1 x1)")), -1);
    }

    #[test]
    fn local_dimension_examples() {
        let origin = [q(0), q(0)];
        assert_eq!(local_dimension(&plane("(< y1 x1)"), &origin), 2);
        assert_eq!(
            local_dimension(&plane("(or (= x1 y1) (and (< 1 x1) (< 1 y1)))"), &origin),
            1
        );
        assert_eq!(local_dimension(&plane("(< 0 x1)"), &[q(-1), q(0)]), -1);
    }

    #[test]
    fn boolean_examples() {
        let full = plane("(<= 0 0)");
        let diag = plane("(= x1 y1)");
        let d = difference(&full, &diag).unwrap();
        assert_eq!(d.cells.len(), 2);
        assert!(d.cells.iter().all(|c| c.eqs.is_empty() && c.strict.len() == 1));
        assert!(set_is_empty(&combine(BoolOp::SymDiff, &diag, &diag).unwrap()));
        assert!(intersect(&plane("(< 0 x1)"), &plane("(< x1 0)"))
            .unwrap()
            .cells
            .is_empty());
    }

    #[test]
    fn equivalence_examples() {
        let full = plane("(<= 0 0)");
        let lower = difference(&full, &plane("(<= x1 y1)")).unwrap();
        assert!(equivalent(&plane("(< y1 x1)"), &lower).unwrap());
        assert!(equivalent(&plane("(and (= x1 y1) (< 0 x1))"), &plane("(and (= x1 y1) (< 0 y1))")).unwrap());
        assert!(!equivalent(&plane("(< 0 x1)"), &plane("(<= 0 x1)")).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let a = plane("(< 0 x1)");
        let b = set("x: x1 ; y: y2", "(< 0 x1)");
        assert!(matches!(union(&a, &b), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn sampling_examples() {
        let c = Cell::universe(1)
            .with(Relation::Lt, e(&[1], 0))
            .with(Relation::Lt, e(&[-1], 1));
        let p = sample_interior(&c).unwrap();
        assert!(c.contains(&p));
        let diag = plane("(= x1 y1)");
        assert_eq!(sample_interior(&diag.cells[0]).unwrap(), vec![q(0), q(0)]);
        let s = set("x: x1 x2 ; y: y1", "(and (= x2 (+ x1 y1)) (< y1 x1))");
        assert!(s.contains(&sample_interior(&s.cells[0]).unwrap()));
        let closed = Cell::universe(1)
            .with(Relation::Le, e(&[1], 0))
            .with(Relation::Le, e(&[-1], 1));
        let p = sample_interior(&closed).unwrap();
        assert!(p[0] > q(0) && p[0] < q(1));
    }

    #[test]
    fn arrangement_examples() {
        let h = Hyperplane::from_expr(&e(&[1, -1], 0)).unwrap();
        assert_eq!(arrangement(std::slice::from_ref(&h), &AffineSubspace::full(2)).len(), 3);
        let axes = [
            Hyperplane::from_expr(&e(&[1, 0], 0)).unwrap(),
            Hyperplane::from_expr(&e(&[0, 1], 0)).unwrap(),
        ];
        assert_eq!(arrangement(&axes, &AffineSubspace::full(2)).len(), 9);
        let line = AffineSubspace::from_equations(2, &[e(&[1, -1], 0)]).unwrap();
        assert_eq!(arrangement(&[h], &line).len(), 1);
    }

    #[test]
    fn subspace_reduction_and_inclusion() {
        let v = AffineSubspace::from_equations(3, &[e(&[1, -1, 1], 0)]).unwrap();
        let h1 = e(&[1, 0, -1], 0);
        let h2 = e(&[2, -1, 0], 0);
        assert_eq!(v.reduce(&h1), v.reduce(&h2));
        let line = AffineSubspace::from_equations(3, &[e(&[1, -1, 1], 0), e(&[0, 0, 1], 0)]).unwrap();
        assert!(line.is_subset_of(&v));
        assert!(!v.is_subset_of(&line));
        assert!(AffineSubspace::<Q>::from_equations(1, &[e(&[1], 0), e(&[1], -1)]).is_none());
    }
}
