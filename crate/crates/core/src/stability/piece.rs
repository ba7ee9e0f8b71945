use num_rational::BigRational;

use crate::equational::{EquationalClosedSet, IrreducibleClosed};
use crate::error::{Error, Result};
use crate::formula::{Partition, Theory};
use crate::polyhedra;
use crate::qe::SemilinearSet;
use crate::scalar::Scalar;

/// `(Z \ W) ∩ (X × Y)` with `Z`, `W` closed, `X` over the x-variables and
/// `Y` over the y-variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpecialStablePiece<S = BigRational> {
    pub z: EquationalClosedSet<S>,
    pub w: EquationalClosedSet<S>,
    pub x: SemilinearSet<S>,
    pub y: SemilinearSet<S>,
}

/// `X × Y` over the concatenated variable list.
pub fn product<S: Scalar>(x: &SemilinearSet<S>, y: &SemilinearSet<S>) -> SemilinearSet<S> {
    let mut vars = x.vars.clone();
    vars.extend(y.vars.iter().cloned());
    let n = vars.len();
    let xmap: Vec<usize> = (0..x.arity()).collect();
    let ymap: Vec<usize> = (x.arity()..n).collect();
    let mut out = SemilinearSet::empty(vars);
    for cx in &x.cells {
        let cx = cx.remap(&xmap, n);
        for cy in &y.cells {
            out.push(cx.conj(&cy.remap(&ymap, n)));
        }
    }
    out
}

impl<S: Scalar> SpecialStablePiece<S> {
    pub fn new(z: EquationalClosedSet<S>, w: EquationalClosedSet<S>, x: SemilinearSet<S>, y: SemilinearSet<S>) -> Self {
        SpecialStablePiece { z, w, x, y }
    }

    /// `(Z \ W) ∩ (full × full)`.
    pub fn equational(z: EquationalClosedSet<S>, w: EquationalClosedSet<S>, partition: &Partition) -> Self {
        SpecialStablePiece {
            z,
            w,
            x: SemilinearSet::universe(partition.x.clone()),
            y: SemilinearSet::universe(partition.y.clone()),
        }
    }

    /// `full × (X × Y)`.
    pub fn rectangle(x: SemilinearSet<S>, y: SemilinearSet<S>, theory: Theory) -> Self {
        let n = x.arity() + y.arity();
        SpecialStablePiece {
            z: EquationalClosedSet::from_components(n, vec![IrreducibleClosed::full(n, theory)]),
            w: EquationalClosedSet::empty(n),
            x,
            y,
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v = self.x.vars.clone();
        v.extend(self.y.vars.iter().cloned());
        v
    }

    /// The set this piece denotes.
    pub fn to_set(&self) -> Result<SemilinearSet<S>> {
        let vars = self.vars();
        let zw = polyhedra::difference(&self.z.to_set(&vars), &self.w.to_set(&vars))?;
        polyhedra::intersect(&zw, &product(&self.x, &self.y))
    }

    /// Variable scopes match the partition and `Z`, `W` use equations only.
    pub fn is_special_stable(&self, partition: &Partition) -> bool {
        let n = partition.len();
        let eq_only = |s: &EquationalClosedSet<S>| {
            s.arity() == n
                && s.to_set(&partition.variables())
                    .cells
                    .iter()
                    .all(|c| c.strict.is_empty() && c.weak.is_empty())
        };
        self.x.vars == partition.x && self.y.vars == partition.y && eq_only(&self.z) && eq_only(&self.w)
    }

    /// Special stable pieces whose union is the complement of this one:
    /// the complement of `Z \ W`, the parts of `W`, and the three products
    /// making up the complement of `X × Y`.
    pub fn complement_pieces(&self, theory: Theory) -> Result<Vec<SpecialStablePiece<S>>> {
        let n = self.x.arity() + self.y.arity();
        if self.z.arity() != n || self.w.arity() != n {
            return Err(Error::Arity {
                expected: n,
                found: self.z.arity(),
            });
        }
        let full = EquationalClosedSet::from_components(n, vec![IrreducibleClosed::full(n, theory)]);
        let ux = SemilinearSet::universe(self.x.vars.clone());
        let uy = SemilinearSet::universe(self.y.vars.clone());
        let xc = polyhedra::complement(&self.x)?;
        let yc = polyhedra::complement(&self.y)?;
        let mut out = vec![SpecialStablePiece::new(
            full.clone(),
            self.z.clone(),
            ux.clone(),
            uy.clone(),
        )];
        if !self.w.is_empty() {
            out.push(SpecialStablePiece::new(
                self.w.clone(),
                EquationalClosedSet::empty(n),
                ux,
                uy,
            ));
        }
        for (x, y) in [(&xc, &yc), (&xc, &self.y), (&self.x, &yc)] {
            out.push(SpecialStablePiece::new(
                full.clone(),
                EquationalClosedSet::empty(n),
                x.clone(),
                y.clone(),
            ));
        }
        Ok(out)
    }
}

/// Union of the sets denoted by `pieces`, over `vars`.
pub fn union_of<S: Scalar>(pieces: &[SpecialStablePiece<S>], vars: &[String]) -> Result<SemilinearSet<S>> {
    let mut acc = SemilinearSet::empty(vars.to_vec());
    for p in pieces {
        acc = polyhedra::union(&acc, &p.to_set()?)?;
    }
    Ok(acc)
}
