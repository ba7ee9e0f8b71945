//! Stable/unstable classification with decomposition or ladder witness.
//!
//! The set is processed by dimension. At each level every closed component
//! of the current remainder is examined: a facet whose hyperplane does not
//! split across the partition yields a ladder; otherwise the set is covered
//! by a grid of rectangles up to a lower-dimensional remainder, which is
//! processed next.

mod boundary;
mod grid;
mod ladder;
mod piece;

pub use boundary::{essential_boundary, essential_boundary_with, FacetAnalysis, Side};
pub use grid::{grid_decompose, GridOutcome};
pub use ladder::{make_ladder, LadderWitness};
pub use piece::{product, union_of, SpecialStablePiece};

use num_rational::BigRational;

use crate::equational::{equational_closure, IrreducibleClosed};
use crate::error::{Error, Result};
use crate::formula::{Partition, Problem, Theory};
use crate::polyhedra::{self, Hyperplane};
use crate::qe::{eliminate_quantifiers, SemilinearSet};
use crate::scalar::Scalar;

/// The component and facet responsible for instability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Culprit<S = BigRational> {
    pub component: IrreducibleClosed<S>,
    pub facet: FacetAnalysis<S>,
    pub x_len: usize,
}

impl<S: Scalar> Culprit<S> {
    pub fn witness(&self, k: usize) -> Result<LadderWitness<S>> {
        make_ladder(&self.facet, k, self.x_len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityVerdict<S = BigRational> {
    Stable(Vec<SpecialStablePiece<S>>),
    Unstable(Box<Culprit<S>>),
}

impl<S: Scalar> StabilityVerdict<S> {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable(_))
    }

    pub fn name(&self) -> &'static str {
        if self.is_stable() {
            "stable"
        } else {
            "unstable"
        }
    }
}

/// One grid step: the component dimension and the remainder dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridCheck {
    pub component_dim: usize,
    pub remainder_dim: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub grid_checks: Vec<GridCheck>,
    /// Dimension of the remainder at the start of each level.
    pub levels: Vec<i64>,
}

pub fn analyze<S: Scalar>(problem: &Problem<S>) -> Result<StabilityVerdict<S>> {
    Ok(analyze_traced(problem)?.0)
}

pub fn analyze_traced<S: Scalar>(problem: &Problem<S>) -> Result<(StabilityVerdict<S>, Trace)> {
    let d = eliminate_quantifiers(problem)?;
    analyze_set(&d, &problem.partition, problem.theory)
}

/// Classifies a quantifier-free set over `partition.variables()`.
pub fn analyze_set<S: Scalar>(
    d: &SemilinearSet<S>,
    partition: &Partition,
    theory: Theory,
) -> Result<(StabilityVerdict<S>, Trace)> {
    let vars = partition.variables();
    if d.vars != vars {
        return Err(Error::AmbientMismatch {
            left: d.vars.clone(),
            right: vars,
        });
    }
    let x_len = partition.x_len();
    let mut trace = Trace::default();
    let mut pieces = Vec::new();
    // Hyperplanes bounding earlier pieces; sample points keep clear of them
    // so that ladders found in a remainder stay valid for the whole set.
    let mut guards: Vec<Hyperplane<S>> = Vec::new();
    let mut rest = d.clone();
    loop {
        if polyhedra::set_is_empty(&rest) {
            return Ok((StabilityVerdict::Stable(pieces), trace));
        }
        let level_dim = polyhedra::dimension(&rest);
        if let Some(&prev) = trace.levels.last() {
            if level_dim >= prev {
                return Err(Error::Invariant(format!(
                    "dimension did not drop: {prev} -> {level_dim}"
                )));
            }
        }
        trace.levels.push(level_dim);
        let closure = equational_closure(&rest, theory);
        let mut level_pieces = Vec::new();
        let mut level_guards = Vec::new();
        for v in closure.components() {
            let d_v = polyhedra::intersect(&rest, &v.to_set(&vars))?;
            let facets = essential_boundary_with(&d_v, v, None, &guards, x_len)?;
            if let Some(f) = facets.iter().find(|f| !f.split.is_split()) {
                return Ok((
                    StabilityVerdict::Unstable(Box::new(Culprit {
                        component: v.clone(),
                        facet: f.clone(),
                        x_len,
                    })),
                    trace,
                ));
            }
            let outcome = grid_decompose(&d_v, v, &facets, partition, theory)?;
            trace.grid_checks.push(GridCheck {
                component_dim: outcome.component_dim,
                remainder_dim: outcome.remainder_dim,
            });
            level_pieces.extend(outcome.pieces);
            level_guards.extend(outcome.guards);
        }
        rest = polyhedra::difference(&rest, &union_of(&level_pieces, &vars)?)?;
        pieces.extend(level_pieces);
        guards.extend(level_guards);
        guards.sort();
        guards.dedup();
    }
}
