//! Closed sets of the equational topology and the split test for
//! hyperplanes on a closed component.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::formula::{Formula, Theory};
use crate::linalg;
use crate::polyhedra::{self, AffineSubspace, Hyperplane};
use crate::qe::{Cell, LinExpr, SemilinearSet};
use crate::scalar::Scalar;

/// Equalities between variables plus constant pins: the irreducible closed
/// sets of a pure order.
///
/// Every class has at least two members or carries a pin; no two classes
/// carry the same pin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderClosed<S = BigRational> {
    pub arity: usize,
    pub classes: Vec<(Vec<usize>, Option<S>)>,
}

impl<S: Scalar> OrderClosed<S> {
    /// Canonicalizes raw classes: merges equal pins, drops trivial
    /// singletons, sorts.
    pub fn new(arity: usize, classes: Vec<(Vec<usize>, Option<S>)>) -> Self {
        let mut pinned: BTreeMap<S, Vec<usize>> = BTreeMap::new();
        let mut free = Vec::new();
        for (mut members, pin) in classes {
            match pin {
                Some(c) => pinned.entry(c).or_default().append(&mut members),
                None if members.len() >= 2 => free.push((members, None)),
                None => {}
            }
        }
        let mut classes: Vec<(Vec<usize>, Option<S>)> = free;
        classes.extend(pinned.into_iter().map(|(c, m)| (m, Some(c))));
        for (m, _) in classes.iter_mut() {
            m.sort_unstable();
            m.dedup();
        }
        classes.sort();
        OrderClosed { arity, classes }
    }

    pub fn to_affine(&self) -> AffineSubspace<S> {
        let mut eqs = Vec::new();
        for (members, pin) in &self.classes {
            let first = members[0];
            for &m in &members[1..] {
                let mut e = LinExpr::zero(self.arity);
                e.coeffs[first] = S::one();
                e.coeffs[m] = -S::one();
                eqs.push(e);
            }
            if let Some(c) = pin {
                eqs.push(LinExpr::var_minus(self.arity, first, c.clone()));
            }
        }
        AffineSubspace::from_equations(self.arity, &eqs).expect("order equations are consistent")
    }

    /// Reads classes and pins off an affine subspace.
    pub fn from_affine(a: &AffineSubspace<S>) -> Self {
        let n = a.arity();
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        let mut classes: Vec<(Vec<usize>, Option<S>)> = Vec::new();
        for i in 0..n {
            let ri = a.reduce(&LinExpr::var_minus(n, i, S::zero()));
            if ri.is_constant() {
                classes.push((vec![i], Some(ri.constant)));
                class_of[i] = Some(classes.len() - 1);
                continue;
            }
            for j in 0..i {
                if class_of[j].is_none() || classes[class_of[j].unwrap()].1.is_some() {
                    continue;
                }
                let rj = a.reduce(&LinExpr::var_minus(n, j, S::zero()));
                if ri == rj {
                    let k = class_of[j].unwrap();
                    classes[k].0.push(i);
                    class_of[i] = Some(k);
                    break;
                }
            }
            if class_of[i].is_none() {
                classes.push((vec![i], None));
                class_of[i] = Some(classes.len() - 1);
            }
        }
        OrderClosed::new(n, classes)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrreducibleClosed<S = BigRational> {
    Affine(AffineSubspace<S>),
    Order(OrderClosed<S>),
}

impl<S: Scalar> IrreducibleClosed<S> {
    pub fn full(arity: usize, theory: Theory) -> Self {
        match theory {
            Theory::Doag => IrreducibleClosed::Affine(AffineSubspace::full(arity)),
            Theory::Dlo => IrreducibleClosed::Order(OrderClosed::new(arity, vec![])),
        }
    }

    pub fn to_affine(&self) -> AffineSubspace<S> {
        match self {
            IrreducibleClosed::Affine(a) => a.clone(),
            IrreducibleClosed::Order(o) => o.to_affine(),
        }
    }

    pub fn theory(&self) -> Theory {
        match self {
            IrreducibleClosed::Affine(_) => Theory::Doag,
            IrreducibleClosed::Order(_) => Theory::Dlo,
        }
    }

    pub fn arity(&self) -> usize {
        self.to_affine().arity()
    }

    pub fn dim(&self) -> usize {
        self.to_affine().dim()
    }

    pub fn contains_point(&self, p: &[S]) -> bool {
        self.to_affine().contains_point(p)
    }

    pub fn is_subset_of(&self, other: &IrreducibleClosed<S>) -> bool {
        self.to_affine().is_subset_of(&other.to_affine())
    }

    pub fn to_cell(&self) -> Cell<S> {
        self.to_affine().to_cell()
    }

    pub fn to_set(&self, vars: &[String]) -> SemilinearSet<S> {
        self.to_affine().to_set(vars)
    }

    pub fn to_formula(&self, vars: &[String]) -> Formula<S> {
        self.to_cell().to_formula(vars)
    }
}

/// A finite union of irreducible closed sets, none contained in another.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationalClosedSet<S = BigRational> {
    arity: usize,
    components: Vec<IrreducibleClosed<S>>,
}

impl<S: Scalar> EquationalClosedSet<S> {
    pub fn empty(arity: usize) -> Self {
        EquationalClosedSet {
            arity,
            components: Vec::new(),
        }
    }

    /// Keeps only the maximal components, in a canonical order.
    pub fn from_components(arity: usize, comps: Vec<IrreducibleClosed<S>>) -> Self {
        let mut comps = comps;
        comps.sort();
        comps.dedup();
        let keep: Vec<IrreducibleClosed<S>> = comps
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                !comps
                    .iter()
                    .enumerate()
                    .any(|(j, d)| j != *i && c.is_subset_of(d) && !(d.is_subset_of(c) && j > *i))
            })
            .map(|(_, c)| c.clone())
            .collect();
        EquationalClosedSet {
            arity,
            components: keep,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn components(&self) -> &[IrreducibleClosed<S>] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains_point(&self, p: &[S]) -> bool {
        self.components.iter().any(|c| c.contains_point(p))
    }

    pub fn union(&self, other: &EquationalClosedSet<S>) -> Self {
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        EquationalClosedSet::from_components(self.arity, comps)
    }

    pub fn to_set(&self, vars: &[String]) -> SemilinearSet<S> {
        SemilinearSet::from_cells(vars.to_vec(), self.components.iter().map(|c| c.to_cell()).collect())
    }

    pub fn to_formula(&self, vars: &[String]) -> Formula<S> {
        self.to_set(vars).to_formula()
    }
}

/// The closure of a single non-empty cell; `None` if the cell is empty.
pub fn cell_closure<S: Scalar>(cell: &Cell<S>, theory: Theory) -> Option<IrreducibleClosed<S>> {
    let hull = polyhedra::affine_hull(cell).ok()?;
    Some(match theory {
        Theory::Doag => IrreducibleClosed::Affine(hull),
        // An equation holds on a convex cell iff it holds on its hull, so
        // the entailed order equalities and pins are read off the hull.
        Theory::Dlo => IrreducibleClosed::Order(OrderClosed::from_affine(&hull)),
    })
}

/// Smallest closed set containing `s`.
pub fn equational_closure<S: Scalar>(s: &SemilinearSet<S>, theory: Theory) -> EquationalClosedSet<S> {
    let comps = s.cells.iter().filter_map(|c| cell_closure(c, theory)).collect();
    EquationalClosedSet::from_components(s.arity(), comps)
}

/// The stored components, after re-checking that none contains another.
pub fn irreducible_components<S: Scalar>(z: &EquationalClosedSet<S>) -> Result<Vec<IrreducibleClosed<S>>> {
    let cs = z.components();
    for (i, a) in cs.iter().enumerate() {
        for (j, b) in cs.iter().enumerate() {
            if i != j && a.is_subset_of(b) {
                return Err(Error::Invariant(format!("component {i} lies inside component {j}")));
            }
        }
    }
    Ok(cs.to_vec())
}

/// How a hyperplane section of a component looks across the partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SplitResult<S = BigRational> {
    /// On the component the hyperplane equals this one, which only
    /// involves x-variables.
    PureX(Hyperplane<S>),
    PureY(Hyperplane<S>),
    /// `u` moves x inside the component and crosses the hyperplane, `v`
    /// does the same for y.
    NonSplit {
        u: Vec<S>,
        v: Vec<S>,
    },
}

impl<S: Scalar> SplitResult<S> {
    pub fn is_split(&self) -> bool {
        !matches!(self, SplitResult::NonSplit { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SplitResult::PureX(_) => "pure-x",
            SplitResult::PureY(_) => "pure-y",
            SplitResult::NonSplit { .. } => "non-split",
        }
    }

    pub fn rewritten(&self) -> Option<&Hyperplane<S>> {
        match self {
            SplitResult::PureX(h) | SplitResult::PureY(h) => Some(h),
            SplitResult::NonSplit { .. } => None,
        }
    }
}

/// Decides whether `h`, restricted to `v`, can be written using only the
/// first `x_len` variables or only the rest.
pub fn split_modulo<S: Scalar>(h: &Hyperplane<S>, v: &IrreducibleClosed<S>, x_len: usize) -> Result<SplitResult<S>> {
    let a = v.to_affine();
    let n = a.arity();
    if h.arity() != n {
        return Err(Error::Arity {
            expected: n,
            found: h.arity(),
        });
    }
    if a.reduce(&h.expr()).is_constant() {
        return Err(Error::DegenerateHyperplane);
    }
    let rows = a.rows();
    let ex: Vec<Vec<S>> = rows.iter().map(|r| r.coeffs[..x_len].to_vec()).collect();
    let ey: Vec<Vec<S>> = rows.iter().map(|r| r.coeffs[x_len..].to_vec()).collect();
    let (k, l) = (h.normal_x(x_len), h.normal_y(x_len));

    let rewrite = |lambda: Vec<S>| -> Result<Hyperplane<S>> {
        let mut e = h.expr();
        for (row, c) in rows.iter().zip(&lambda) {
            e = e.sub(&row.scale(c));
        }
        Hyperplane::from_expr(&e)
    };
    if let Some(lambda) = linalg::solve_combination(&ey, l) {
        return Ok(SplitResult::PureX(rewrite(lambda)?));
    }
    if let Some(mu) = linalg::solve_combination(&ex, k) {
        return Ok(SplitResult::PureY(rewrite(mu)?));
    }
    let crossing = |block: &[Vec<S>], normal: &[S]| -> Result<Vec<S>> {
        linalg::nullspace(block, normal.len())
            .into_iter()
            .find(|u| !linalg::dot(u, normal).is_zero())
            .ok_or_else(|| Error::Invariant("no crossing direction".into()))
    };
    Ok(SplitResult::NonSplit {
        u: crossing(&ex, k)?,
        v: crossing(&ey, l)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::qe::to_cells;
    use num_traits::Zero;

    type Q = BigRational;

    fn set(theory: &str, vars: &str, f: &str) -> SemilinearSet<Q> {
        let p = parse(&format!("theory {theory}\nvars {vars}\nformula {f}")).unwrap();
        to_cells(&p.formula, &p.partition.variables()).unwrap()
    }

    fn e(c: &[i64], k: i64) -> LinExpr<Q> {
        LinExpr::new(c.iter().map(|&x| Q::from_int(x)).collect(), Q::from_int(k))
    }

    fn hyper(c: &[i64], k: i64) -> Hyperplane<Q> {
        Hyperplane::from_expr(&e(c, k)).unwrap()
    }

    #[test]
    fn closure_examples() {
        let z = equational_closure(&set("doag", "x: x1 ; y: y1", "(< y1 x1)"), Theory::Doag);
        assert_eq!(z.components(), &[IrreducibleClosed::Affine(AffineSubspace::full(2))]);
        let z = equational_closure(&set("doag", "x: x1 ; y: y1", "(and (= x1 y1) (< 0 x1))"), Theory::Doag);
        assert_eq!(z.components()[0].to_affine().equations(), vec![e(&[1, -1], 0)]);
        let z = equational_closure(&set("dlo", "x: x1 ; y: y1", "(and (<= x1 y1) (<= y1 x1))"), Theory::Dlo);
        assert_eq!(z.components().len(), 1);
        assert_eq!(z.components()[0].to_affine().equations(), vec![e(&[1, -1], 0)]);
    }

    #[test]
    fn dlo_closure_pins_constants() {
        let z = equational_closure(
            &set("dlo", "x: x1 x2 ; y: y1", "(and (<= 3 x1) (<= x1 3) (= x2 y1))"),
            Theory::Dlo,
        );
        let IrreducibleClosed::Order(o) = &z.components()[0] else {
            panic!()
        };
        assert_eq!(o.classes, vec![(vec![0], Some(Q::from_int(3))), (vec![1, 2], None)]);
    }

    #[test]
    fn component_examples() {
        let z = equational_closure(&set("doag", "x: x1 ; y: y1", "(or (= x1 0) (= y1 0))"), Theory::Doag);
        assert_eq!(irreducible_components(&z).unwrap().len(), 2);
        let z = equational_closure(
            &set("doag", "x: x1 ; y: y1", "(or (and (= x1 0) (= y1 0)) (= x1 0))"),
            Theory::Doag,
        );
        let comps = irreducible_components(&z).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dim(), 1);
        let z = equational_closure(&set("doag", "x: x1 ; y: y1", "(<= 0 0)"), Theory::Doag);
        assert_eq!(irreducible_components(&z).unwrap()[0].to_affine().codim(), 0);
    }

    #[test]
    fn split_examples() {
        let plane = IrreducibleClosed::Affine(AffineSubspace::full(2));
        match split_modulo(&hyper(&[1, -1], 0), &plane, 1).unwrap() {
            SplitResult::NonSplit { u, v } => {
                assert_eq!(u, vec![Q::from_int(1)]);
                assert_eq!(v, vec![Q::from_int(1)]);
            }
            other => panic!("{other:?}"),
        }

        let section = IrreducibleClosed::Affine(AffineSubspace::from_equations(3, &[e(&[-1, 1, -1], 0)]).unwrap());
        assert_eq!(
            split_modulo(&hyper(&[1, 0, -1], 0), &section, 2).unwrap(),
            SplitResult::PureX(hyper(&[2, -1, 0], 0))
        );

        let diag = IrreducibleClosed::Affine(AffineSubspace::from_equations(3, &[e(&[1, -1, 0], 0)]).unwrap());
        match split_modulo(&hyper(&[-1, 0, 1], 0), &diag, 2).unwrap() {
            SplitResult::NonSplit { u, v } => {
                assert!(linalg::dot(&u, &[Q::from_int(1), Q::from_int(-1)]).is_zero());
                assert!(!u[0].is_zero());
                assert_eq!(v, vec![Q::from_int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_rejects_hyperplane_containing_component() {
        let line = IrreducibleClosed::Affine(AffineSubspace::from_equations(2, &[e(&[1, -1], 0)]).unwrap());
        assert_eq!(
            split_modulo(&hyper(&[1, -1], 0), &line, 1),
            Err(Error::DegenerateHyperplane)
        );
    }
}
