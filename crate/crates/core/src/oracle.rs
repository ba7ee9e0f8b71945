//! Independent checks: brute-force ladder search, witness and decomposition
//! verification.

use crate::error::{Error, Result};
use crate::formula::Partition;
use crate::polyhedra;
use crate::qe::{Cell, SemilinearSet};
use crate::scalar::Scalar;
use crate::stability::{union_of, LadderWitness, SpecialStablePiece};

/// Default node budget for [`ladder_exists`].
pub const DEFAULT_BUDGET: usize = 200_000;

/// Pairs in the order they are constrained: each new index `m` adds
/// `(i, m)` and `(m, i)` for `i < m`, then `(m, m)`.
fn pair_order(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for m in 0..k {
        for i in 0..m {
            out.push((i, m));
            out.push((m, i));
        }
        out.push((m, m));
    }
    out
}

/// Searches for points `a_1..a_k`, `b_1..b_k` with `(a_i, b_j) ∈ d` iff
/// `i <= j`, choosing a cell of `d` or of its complement for every pair.
///
/// Exhaustive: `Ok(None)` means no ladder of length `k` exists.
/// `Err(ResourceLimit)` when more than `budget` search nodes are needed.
pub fn ladder_exists<S: Scalar>(
    d: &SemilinearSet<S>,
    partition: &Partition,
    k: usize,
    budget: usize,
) -> Result<Option<LadderWitness<S>>> {
    if k == 0 {
        return Err(Error::Arity { expected: 1, found: 0 });
    }
    if d.arity() != partition.len() {
        return Err(Error::Arity {
            expected: partition.len(),
            found: d.arity(),
        });
    }
    let (xl, yl) = (partition.x_len(), partition.y_len());
    let big = k * (xl + yl);
    let inside = d.cells.clone();
    let outside = polyhedra::complement(d)?.cells;
    let placed = |c: &Cell<S>, i: usize, j: usize| {
        let map: Vec<usize> = (0..xl)
            .map(|t| i * xl + t)
            .chain((0..yl).map(|t| k * xl + j * yl + t))
            .collect();
        c.remap(&map, big)
    };
    let choices: Vec<Vec<Cell<S>>> = pair_order(k)
        .into_iter()
        .map(|(i, j)| {
            let src = if i <= j { &inside } else { &outside };
            src.iter().map(|c| placed(c, i, j)).collect()
        })
        .collect();

    let mut nodes = 0usize;
    let Some(cell) = search(&choices, 0, Cell::universe(big), &mut nodes, budget)? else {
        return Ok(None);
    };
    let p = polyhedra::sample_interior(&cell)?;
    let a = (0..k).map(|i| p[i * xl..(i + 1) * xl].to_vec()).collect();
    let b = (0..k)
        .map(|j| p[k * xl + j * yl..k * xl + (j + 1) * yl].to_vec())
        .collect();
    Ok(Some(LadderWitness { a, b }))
}

fn search<S: Scalar>(
    choices: &[Vec<Cell<S>>],
    depth: usize,
    acc: Cell<S>,
    nodes: &mut usize,
    budget: usize,
) -> Result<Option<Cell<S>>> {
    if depth == choices.len() {
        return Ok(Some(acc));
    }
    for c in &choices[depth] {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::ResourceLimit(format!("ladder search exceeded {budget} nodes")));
        }
        let Some(next) = acc.conj(c).simplify() else {
            continue;
        };
        if polyhedra::is_empty(&next) {
            continue;
        }
        if let Some(found) = search(choices, depth + 1, next, nodes, budget)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// `(a_i, b_j) ∈ d` exactly when `i <= j`, for all `k²` pairs.
pub fn verify_ladder<S: Scalar>(d: &SemilinearSet<S>, partition: &Partition, w: &LadderWitness<S>) -> Result<bool> {
    if w.a.len() != w.b.len() {
        return Err(Error::Arity {
            expected: w.a.len(),
            found: w.b.len(),
        });
    }
    for (pts, len) in [(&w.a, partition.x_len()), (&w.b, partition.y_len())] {
        if let Some(bad) = pts.iter().find(|p| p.len() != len) {
            return Err(Error::Arity {
                expected: len,
                found: bad.len(),
            });
        }
    }
    for i in 0..w.k() {
        for j in 0..w.k() {
            if d.contains(&w.pair(i, j)) != (i <= j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionReport {
    /// The union of the pieces is the set.
    pub union_equivalent: bool,
    /// Every piece has the special stable shape.
    pub special_stable: bool,
    /// Every piece lies inside the set.
    pub pieces_inside: bool,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.union_equivalent && self.special_stable && self.pieces_inside
    }
}

pub fn verify_decomposition<S: Scalar>(
    d: &SemilinearSet<S>,
    pieces: &[SpecialStablePiece<S>],
    partition: &Partition,
) -> Result<DecompositionReport> {
    let vars = partition.variables();
    let special_stable = pieces.iter().all(|p| p.is_special_stable(partition));
    if !special_stable {
        return Ok(DecompositionReport {
            union_equivalent: false,
            special_stable,
            pieces_inside: false,
        });
    }
    let mut pieces_inside = true;
    for p in pieces {
        if !polyhedra::is_subset(&p.to_set()?, d)? {
            pieces_inside = false;
            break;
        }
    }
    let union_equivalent = polyhedra::equivalent(&union_of(pieces, &vars)?, d)?;
    Ok(DecompositionReport {
        union_equivalent,
        special_stable,
        pieces_inside,
    })
}
