use std::collections::BTreeSet;

use num_rational::BigRational;

use super::boundary::FacetAnalysis;
use super::piece::{union_of, SpecialStablePiece};
use crate::equational::{equational_closure, EquationalClosedSet, IrreducibleClosed, SplitResult};
use crate::error::{Error, Result};
use crate::formula::{Partition, Theory};
use crate::polyhedra::{self, Hyperplane};
use crate::qe::{Cell, LinExpr, SemilinearSet};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct GridOutcome<S = BigRational> {
    pub pieces: Vec<SpecialStablePiece<S>>,
    /// `d_v` minus the pieces; lower-dimensional than the component.
    pub remainder: SemilinearSet<S>,
    /// Grid hyperplanes and the equations of every `W` and of the
    /// component, over the full ambient.
    pub guards: Vec<Hyperplane<S>>,
    pub component_dim: usize,
    pub remainder_dim: i64,
}

fn chambers<S: Scalar>(normals: &BTreeSet<LinExpr<S>>, arity: usize) -> Vec<Cell<S>> {
    let hyps: Vec<Hyperplane<S>> = normals.iter().filter_map(|e| Hyperplane::from_expr(e).ok()).collect();
    polyhedra::open_arrangement(&hyps, &Cell::universe(arity))
}

/// Covers `d_v` by products of open chambers of the pure-x and pure-y
/// facet hyperplanes, up to a lower-dimensional remainder.
pub fn grid_decompose<S: Scalar>(
    d_v: &SemilinearSet<S>,
    v: &IrreducibleClosed<S>,
    facets: &[FacetAnalysis<S>],
    partition: &Partition,
    theory: Theory,
) -> Result<GridOutcome<S>> {
    let vars = partition.variables();
    let (n, xl) = (vars.len(), partition.x_len());
    let mut hx = BTreeSet::new();
    let mut hy = BTreeSet::new();
    for f in facets {
        match &f.split {
            SplitResult::PureX(h) => {
                hx.insert(LinExpr::new(h.normal_x(xl).to_vec(), -h.offset.clone()).normalized_eq());
            }
            SplitResult::PureY(h) => {
                hy.insert(LinExpr::new(h.normal_y(xl).to_vec(), -h.offset.clone()).normalized_eq());
            }
            other => {
                return Err(Error::WrongSplit {
                    expected: "pure-x or pure-y",
                    found: other.kind(),
                })
            }
        }
    }
    let xmap: Vec<usize> = (0..xl).collect();
    let ymap: Vec<usize> = (xl..n).collect();
    let xcells = chambers(&hx, xl);
    let ycells = chambers(&hy, n - xl);

    let dim = v.dim();
    let z = EquationalClosedSet::from_components(n, vec![v.clone()]);
    let vcell = v.to_cell();
    let mut pieces = Vec::new();
    let mut guards: BTreeSet<Hyperplane<S>> = BTreeSet::new();
    for cx in &xcells {
        for cy in &ycells {
            let rect = vcell.conj(&cx.remap(&xmap, n)).conj(&cy.remap(&ymap, n));
            if polyhedra::is_empty(&rect) {
                continue;
            }
            let r = SemilinearSet::from_cells(vars.clone(), vec![rect]);
            if polyhedra::dimension(&polyhedra::intersect(d_v, &r)?) != dim as i64 {
                continue;
            }
            let w = equational_closure(&polyhedra::difference(&r, d_v)?, theory);
            for comp in w.components() {
                for e in comp.to_affine().equations() {
                    guards.insert(Hyperplane::from_expr(&e)?);
                }
            }
            pieces.push(SpecialStablePiece::new(
                z.clone(),
                w,
                SemilinearSet::from_cells(partition.x.clone(), vec![cx.clone()]),
                SemilinearSet::from_cells(partition.y.clone(), vec![cy.clone()]),
            ));
        }
    }
    let remainder = polyhedra::difference(d_v, &union_of(&pieces, &vars)?)?;
    let remainder_dim = polyhedra::dimension(&remainder);
    if remainder_dim >= dim as i64 {
        return Err(Error::Invariant(format!(
            "grid remainder has dimension {remainder_dim} in a component of dimension {dim}"
        )));
    }
    for e in hx
        .iter()
        .map(|e| e.remap(&xmap, n))
        .chain(hy.iter().map(|e| e.remap(&ymap, n)))
    {
        guards.insert(Hyperplane::from_expr(&e)?);
    }
    for e in v.to_affine().equations() {
        guards.insert(Hyperplane::from_expr(&e)?);
    }
    Ok(GridOutcome {
        pieces,
        remainder,
        guards: guards.into_iter().collect(),
        component_dim: dim,
        remainder_dim,
    })
}
