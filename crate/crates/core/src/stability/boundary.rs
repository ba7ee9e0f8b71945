use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::equational::{split_modulo, IrreducibleClosed, SplitResult};
use crate::error::{Error, Result};
use crate::formula::Relation;
use crate::linalg;
use crate::polyhedra::{self, AffineSubspace, Hyperplane};
use crate::qe::{Cell, LinExpr, SemilinearSet};
use crate::scalar::Scalar;

/// Which open side of a facet hyperplane lies in the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `normal . p > offset`
    Positive,
    Negative,
}

/// An essential facet family: the hyperplane (canonical modulo the
/// component), the facet cells on it where membership flips, and data for
/// building ladders at the first of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetAnalysis<S = BigRational> {
    pub hyperplane: Hyperplane<S>,
    pub facet: Cell<S>,
    pub facets: Vec<Cell<S>>,
    /// Relative-interior point of `facet`.
    pub point: Vec<S>,
    /// No other arrangement hyperplane comes within max-norm distance
    /// `2 * radius` of `point` along the component.
    pub radius: S,
    pub side: Side,
    pub split: SplitResult<S>,
}

/// Essential facets of `d_v` inside the component `v`.
pub fn essential_boundary<S: Scalar>(
    d_v: &SemilinearSet<S>,
    v: &IrreducibleClosed<S>,
    x_len: usize,
) -> Result<Vec<FacetAnalysis<S>>> {
    essential_boundary_with(d_v, v, None, &[], x_len)
}

/// Max-norm radius around `p` free of the hyperplanes `others` (as
/// functions on the component), halved.
fn clear_radius<S: Scalar>(p: &[S], others: &[&Hyperplane<S>]) -> S {
    others
        .iter()
        .map(|g| g.value(p).abs() / linalg::l1_norm(&g.normal))
        .min()
        .unwrap_or_else(S::one)
        / S::two()
}

/// A direction inside `a` along which `h` grows at unit rate.
fn unit_crossing<S: Scalar>(a: &AffineSubspace<S>, h: &Hyperplane<S>) -> Result<Vec<S>> {
    for b in a.directions() {
        let rate = linalg::dot(&h.normal, &b);
        if !rate.is_zero() {
            return Ok(b.into_iter().map(|x| x / rate.clone()).collect());
        }
    }
    Err(Error::DegenerateHyperplane)
}

/// [`essential_boundary`] restricted to an open `region` of the component,
/// with extra `guards` hyperplanes kept away from the sample points.
pub fn essential_boundary_with<S: Scalar>(
    d_v: &SemilinearSet<S>,
    v: &IrreducibleClosed<S>,
    region: Option<&Cell<S>>,
    guards: &[Hyperplane<S>],
    x_len: usize,
) -> Result<Vec<FacetAnalysis<S>>> {
    let a = v.to_affine();
    if d_v.arity() != a.arity() {
        return Err(Error::Arity {
            expected: a.arity(),
            found: d_v.arity(),
        });
    }
    let dim = polyhedra::dimension(d_v);
    if dim != a.dim() as i64 {
        return Err(Error::DimensionMismatch {
            expected: a.dim() as i64,
            found: dim,
        });
    }

    let mut exprs: Vec<LinExpr<S>> = d_v
        .cells
        .iter()
        .flat_map(|c| c.constraints().map(|(_, e)| e.clone()).collect::<Vec<_>>())
        .collect();
    exprs.extend(guards.iter().map(|g| g.expr()));
    if let Some(r) = region {
        exprs.extend(r.constraints().map(|(_, e)| e.clone()));
    }
    let hyps: Vec<Hyperplane<S>> = exprs
        .iter()
        .map(|e| a.reduce(e))
        .filter(|e| !e.is_constant())
        .map(|e| Hyperplane::from_expr(&e))
        .collect::<Result<BTreeSet<_>>>()?
        .into_iter()
        .collect();

    let mut base = a.to_cell();
    if let Some(r) = region {
        base = base.conj(r);
    }

    let mut out = Vec::new();
    for (i, h) in hyps.iter().enumerate() {
        let others: Vec<&Hyperplane<S>> = hyps
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g)
            .collect();
        let owned: Vec<Hyperplane<S>> = others.iter().map(|g| (*g).clone()).collect();
        let carrier = base.clone().with(Relation::Eq, h.expr());
        let w = unit_crossing(&a, h)?;
        let w_norm = linalg::max_norm(&w);
        let mut found: Vec<(Cell<S>, Vec<S>, S, Side)> = Vec::new();
        for f in polyhedra::open_arrangement(&owned, &carrier) {
            let p = polyhedra::sample_interior(&f)?;
            let rho = clear_radius(&p, &others);
            let eps = rho.clone() / w_norm.clone();
            let step = |sign: S| -> Vec<S> {
                p.iter()
                    .zip(&w)
                    .map(|(x, d)| x.clone() + sign.clone() * eps.clone() * d.clone())
                    .collect()
            };
            let plus = d_v.contains(&step(S::one()));
            let minus = d_v.contains(&step(-S::one()));
            if plus != minus {
                let side = if plus { Side::Positive } else { Side::Negative };
                found.push((f, p, rho, side));
            }
        }
        if found.is_empty() {
            continue;
        }
        let split = split_modulo(h, v, x_len)?;
        let facets = found.iter().map(|(f, ..)| f.clone()).collect();
        let (facet, point, radius, side) = found.swap_remove(0);
        out.push(FacetAnalysis {
            hyperplane: h.clone(),
            facet,
            facets,
            point,
            radius,
            side,
            split,
        });
    }
    Ok(out)
}
