//! First-order formulas over the order (DLO) and ordered-group (DOAG)
//! signatures, with rational parameters and an `(x; y)` variable split.

mod eval;
mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{coprime_scale, Scalar};

pub use eval::eval_quantified_oracle;
pub use parse::{parse, parse_as};

/// Assignment of rational values to variable names.
pub type Point<S = BigRational> = BTreeMap<String, S>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Dlo,
    Doag,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::Dlo => "dlo",
            Theory::Doag => "doag",
        }
    }

    /// The smallest theory able to express both inputs.
    pub fn join(self, other: Theory) -> Theory {
        self.max(other)
    }
}

/// `sum coeffs[v] * v + constant`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearTerm<S = BigRational> {
    pub coeffs: BTreeMap<String, S>,
    pub constant: S,
}

impl<S: Scalar> LinearTerm<S> {
    pub fn constant(c: S) -> Self {
        LinearTerm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), S::one());
        LinearTerm {
            coeffs,
            constant: S::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(v.clone()).or_insert_with(S::zero);
            *e = e.clone() + c.clone();
            if e.is_zero() {
                out.coeffs.remove(v);
            }
        }
        out.constant = out.constant + other.constant.clone();
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return LinearTerm::constant(S::zero());
        }
        LinearTerm {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c.clone() * k.clone()))
                .collect(),
            constant: self.constant.clone() * k.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn evaluate(&self, point: &Point<S>) -> Result<S> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            let x = point.get(v).ok_or_else(|| Error::MissingAssignment(v.clone()))?;
            acc = acc + c.clone() * x.clone();
        }
        Ok(acc)
    }
}

/// Relation of an atom `0 REL term` (for `Lt`, `Le`) or `term = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

impl Relation {
    pub fn holds<S: Scalar>(self, value: &S) -> bool {
        match self {
            Relation::Lt => value.is_positive(),
            Relation::Le => !value.is_negative(),
            Relation::Eq => value.is_zero(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// A canonical linear atom: integer coprime variable coefficients; equations
/// have a positive coefficient on their first variable (by name).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom<S = BigRational> {
    pub term: LinearTerm<S>,
    pub relation: Relation,
}

impl<S: Scalar> Atom<S> {
    /// Builds `lhs REL rhs`, folding constant comparisons to `True`/`False`.
    pub fn compare(lhs: &LinearTerm<S>, relation: Relation, rhs: &LinearTerm<S>) -> Formula<S> {
        Self::from_term(rhs.sub(lhs), relation)
    }

    pub fn from_term(term: LinearTerm<S>, relation: Relation) -> Formula<S> {
        if term.is_constant() {
            return if relation.holds(&term.constant) {
                Formula::True
            } else {
                Formula::False
            };
        }
        let coeffs: Vec<S> = term.coeffs.values().cloned().collect();
        let mut k = coprime_scale(&coeffs).expect("non-constant term");
        if relation == Relation::Eq && term.coeffs.values().next().is_some_and(|c| c.is_negative()) {
            k = -k;
        }
        Formula::Atom(Atom {
            term: term.scale(&k),
            relation,
        })
    }

    /// True when the atom is expressible in the pure order language: one
    /// variable against a constant, or `x REL y` between two variables.
    pub fn is_order_shaped(&self) -> bool {
        let cs: Vec<&S> = self.term.coeffs.values().collect();
        match cs.as_slice() {
            [c] => c.abs().is_one(),
            [a, b] => a.abs().is_one() && ((*a).clone() + (*b).clone()).is_zero() && self.term.constant.is_zero(),
            _ => false,
        }
    }

    pub fn holds(&self, point: &Point<S>) -> Result<bool> {
        Ok(self.relation.holds(&self.term.evaluate(point)?))
    }

    pub fn variables(&self) -> impl Iterator<Item = &String> {
        self.term.coeffs.keys()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula<S = BigRational> {
    True,
    False,
    Atom(Atom<S>),
    And(Vec<Formula<S>>),
    Or(Vec<Formula<S>>),
    Not(Box<Formula<S>>),
    Exists(Vec<String>, Box<Formula<S>>),
    Forall(Vec<String>, Box<Formula<S>>),
}

impl<S: Scalar> Formula<S> {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula<S>) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for v in a.variables() {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                f.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// All bound variables, in binder order.
    pub fn bound_variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Exists(vs, _) | Formula::Forall(vs, _) = f {
                out.extend(vs.iter().cloned());
            }
        });
        out
    }

    pub fn atoms(&self) -> Vec<&Atom<S>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom<S>>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.collect_atoms(out),
        }
    }

    fn visit(&self, g: &mut impl FnMut(&Formula<S>)) {
        g(self);
        match self {
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit(g)),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.visit(g),
            _ => {}
        }
    }

    /// Truth value of a quantifier-free formula at `point`.
    pub fn evaluate(&self, point: &Point<S>) -> Result<bool> {
        match self {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Atom(a) => a.holds(point),
            Formula::And(fs) => {
                for f in fs {
                    if !f.evaluate(point)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(fs) => {
                for f in fs {
                    if f.evaluate(point)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Not(f) => Ok(!f.evaluate(point)?),
            Formula::Exists(..) | Formula::Forall(..) => Err(Error::Quantified),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub x: Vec<String>,
    pub y: Vec<String>,
}

impl Partition {
    pub fn new<A: Into<String>, B: Into<String>>(
        x: impl IntoIterator<Item = A>,
        y: impl IntoIterator<Item = B>,
    ) -> Result<Self> {
        let p = Partition {
            x: x.into_iter().map(Into::into).collect(),
            y: y.into_iter().map(Into::into).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.is_empty() {
            return Err(Error::EmptyPartition("x"));
        }
        if self.y.is_empty() {
            return Err(Error::EmptyPartition("y"));
        }
        let mut seen = BTreeSet::new();
        for v in self.x.iter().chain(&self.y) {
            if !seen.insert(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        Ok(())
    }

    /// Ambient variable order: `x` then `y`.
    pub fn variables(&self) -> Vec<String> {
        self.x.iter().chain(&self.y).cloned().collect()
    }

    pub fn x_len(&self) -> usize {
        self.x.len()
    }

    pub fn y_len(&self) -> usize {
        self.y.len()
    }

    pub fn len(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem<S = BigRational> {
    pub theory: Theory,
    pub partition: Partition,
    pub formula: Formula<S>,
}

impl<S: Scalar> Problem<S> {
    /// Checks every invariant `parse` guarantees.
    pub fn new(theory: Theory, partition: Partition, formula: Formula<S>) -> Result<Self> {
        partition.validate()?;
        let declared = partition.variables();
        for v in formula.free_variables() {
            if !declared.contains(&v) {
                return Err(Error::UndeclaredVariable(v));
            }
        }
        let mut seen: BTreeSet<String> = declared.iter().cloned().collect();
        for v in formula.bound_variables() {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateVariable(v));
            }
        }
        if theory == Theory::Dlo {
            if let Some(a) = formula.atoms().into_iter().find(|a| !a.is_order_shaped()) {
                return Err(Error::TheoryMismatch(format!(
                    "atom {} is not expressible in the order language",
                    print::atom_sexpr(a)
                )));
            }
        }
        Ok(Problem {
            theory,
            partition,
            formula,
        })
    }
}
