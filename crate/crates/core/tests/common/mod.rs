#![allow(dead_code)]

use std::collections::BTreeMap;

use halfgraph_core::qe::to_cells;
use halfgraph_core::{parse, Problem, Rational, Scalar, SemilinearSet};
use proptest::prelude::*;

/// `(rel (+ (* c v) ... k) 0)` with small integer coefficients.
pub fn doag_atom(vars: &'static [&'static str]) -> impl Strategy<Value = String> {
    (prop::collection::vec(-2i64..=2, vars.len()), -3i64..=3, 0..5usize).prop_map(move |(cs, k, r)| {
        let terms: Vec<String> = cs
            .iter()
            .zip(vars)
            .filter(|(c, _)| **c != 0)
            .map(|(c, v)| format!("(* {c} {v})"))
            .collect();
        let rel = ["<", "<=", "<", "<=", "="][r];
        format!("({rel} (+ {} {k}) 0)", terms.join(" "))
    })
}

pub fn dlo_atom(vars: &'static [&'static str]) -> impl Strategy<Value = String> {
    let operand = prop_oneof![
        3 => prop::sample::select(vars.to_vec()).prop_map(str::to_string),
        1 => (-2i64..=2).prop_map(|c| c.to_string()),
    ];
    (prop::sample::select(vars.to_vec()), operand, 0..5usize)
        .prop_map(|(lhs, rhs, r)| format!("({} {lhs} {rhs})", ["<", "<=", "<", "<=", "="][r]))
}

pub fn combine(atom: BoxedStrategy<String>, depth: u32) -> impl Strategy<Value = String> {
    atom.prop_recursive(depth, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(|v| format!("(and {})", v.join(" "))),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(|v| format!("(or {})", v.join(" "))),
            inner.prop_map(|f| format!("(not {f})")),
        ]
    })
}

pub fn doag_formula(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = String> {
    combine(doag_atom(vars).boxed(), depth)
}

pub fn dlo_formula(vars: &'static [&'static str], depth: u32) -> impl Strategy<Value = String> {
    combine(dlo_atom(vars).boxed(), depth)
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=3).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

pub fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

pub fn problem(theory: &str, xs: &str, ys: &str, f: &str) -> Problem {
    parse(&format!("theory {theory}\nvars x: {xs} ; y: {ys}\nformula {f}")).expect("generated formula parses")
}

/// A set over `x1 ; y1`.
pub fn plane_set(theory: &str, f: &str) -> (Problem, SemilinearSet) {
    let p = problem(theory, "x1", "y1", f);
    let d = to_cells(&p.formula, &p.partition.variables()).unwrap();
    (p, d)
}

pub fn named(vars: &[String], p: &[Rational]) -> BTreeMap<String, Rational> {
    vars.iter().cloned().zip(p.iter().cloned()).collect()
}
