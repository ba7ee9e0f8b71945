use num_rational::BigRational;

use super::boundary::{FacetAnalysis, Side};
use crate::equational::SplitResult;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Points `a_1..a_k` (x-tuples) and `b_1..b_k` (y-tuples) with
/// `(a_i, b_j)` in the set exactly when `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LadderWitness<S = BigRational> {
    pub a: Vec<Vec<S>>,
    pub b: Vec<Vec<S>>,
}

impl<S: Scalar> LadderWitness<S> {
    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// The joined point `(a_i, b_j)`, zero-based.
    pub fn pair(&self, i: usize, j: usize) -> Vec<S> {
        let mut p = self.a[i].clone();
        p.extend(self.b[j].iter().cloned());
        p
    }

    /// First `k` rows and columns.
    pub fn truncate(&self, k: usize) -> Self {
        LadderWitness {
            a: self.a[..k].to_vec(),
            b: self.b[..k].to_vec(),
        }
    }
}

/// Builds a ladder of length `k` next to a non-split facet by moving the
/// x-part along `u` and the y-part along `v` by interleaved small amounts.
pub fn make_ladder<S: Scalar>(facet: &FacetAnalysis<S>, k: usize, x_len: usize) -> Result<LadderWitness<S>> {
    let SplitResult::NonSplit { u, v } = &facet.split else {
        return Err(Error::WrongSplit {
            expected: "non-split",
            found: facet.split.kind(),
        });
    };
    if k == 0 {
        return Err(Error::Arity { expected: 1, found: 0 });
    }
    let h = &facet.hyperplane;
    // Along the facet hyperplane, (s u, t v) shifts the value by s - t.
    let ku = linalg::dot(h.normal_x(x_len), u);
    let lv = linalg::dot(h.normal_y(x_len), v);
    let u: Vec<S> = u.iter().map(|c| c.clone() / ku.clone()).collect();
    let v: Vec<S> = v.iter().map(|c| -c.clone() / lv.clone()).collect();
    let scale = linalg::max_norm(&u).max(linalg::max_norm(&v));
    let reach = facet.radius.clone() / (S::two() * scale);
    let steps = S::from_int(2 * k as i64 + 1);
    let z = |m: usize| reach.clone() * S::from_int(m as i64) / steps.clone();
    let (px, py) = facet.point.split_at(x_len);
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for i in 1..=k {
        // Positive side: s_i > t_j iff i <= j. Negative side: s_i < t_j iff i <= j.
        let (s, t) = match facet.side {
            Side::Positive => (z(2 * (k - i) + 2), z(2 * (k - i) + 1)),
            Side::Negative => (z(2 * i - 1), z(2 * i)),
        };
        a.push(
            px.iter()
                .zip(&u)
                .map(|(p, d)| p.clone() + s.clone() * d.clone())
                .collect(),
        );
        b.push(
            py.iter()
                .zip(&v)
                .map(|(p, d)| p.clone() + t.clone() * d.clone())
                .collect(),
        );
    }
    Ok(LadderWitness { a, b })
}
