mod common;

use common::*;
use halfgraph_core::formula::eval_quantified_oracle;
use halfgraph_core::qe::{eliminate_quantifiers, to_cells};
use halfgraph_core::{parse, parse_as, Formula, SmallRational};
use proptest::prelude::*;

const XY: &[&str] = &["x1", "y1"];
const XYU: &[&str] = &["x1", "y1", "u"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn printing_round_trips(f in doag_formula(XY, 3)) {
        let p = problem("doag", "x1", "y1", &f);
        let again = parse(&p.to_string()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(again.to_string(), p.to_string());
    }

    #[test]
    fn dlo_printing_round_trips(f in dlo_formula(XY, 3)) {
        let p = problem("dlo", "x1", "y1", &f);
        prop_assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn evaluation_follows_connectives(f in doag_formula(XY, 2), g in doag_formula(XY, 2), pt in point(2)) {
        let vars = ["x1".to_string(), "y1".to_string()];
        let env = named(&vars, &pt);
        let (a, b) = (problem("doag", "x1", "y1", &f).formula, problem("doag", "x1", "y1", &g).formula);
        let (va, vb) = (a.evaluate(&env).unwrap(), b.evaluate(&env).unwrap());
        prop_assert_eq!(Formula::And(vec![a.clone(), b.clone()]).evaluate(&env).unwrap(), va && vb);
        prop_assert_eq!(Formula::Or(vec![a.clone(), b]).evaluate(&env).unwrap(), va || vb);
        prop_assert_eq!(Formula::not(a).evaluate(&env).unwrap(), !va);
    }

    #[test]
    fn cells_agree_with_evaluation(f in doag_formula(XY, 3), pts in prop::collection::vec(point(2), 16)) {
        let (p, d) = plane_set("doag", &f);
        let vars = p.partition.variables();
        for pt in &pts {
            prop_assert_eq!(d.contains(pt), p.formula.evaluate(&named(&vars, pt)).unwrap());
        }
    }

    #[test]
    fn dlo_cells_agree_with_evaluation(f in dlo_formula(XY, 3), pts in prop::collection::vec(point(2), 16)) {
        let (p, d) = plane_set("dlo", &f);
        let vars = p.partition.variables();
        for pt in &pts {
            prop_assert_eq!(d.contains(pt), p.formula.evaluate(&named(&vars, pt)).unwrap());
        }
    }

    #[test]
    fn elimination_matches_oracle(
        body in doag_formula(XYU, 2),
        universal in any::<bool>(),
        pts in prop::collection::vec(point(2), 16),
    ) {
        let q = if universal { "forall" } else { "exists" };
        let p = problem("doag", "x1", "y1", &format!("({q} (u) {body})"));
        let d = eliminate_quantifiers(&p).unwrap();
        let vars = p.partition.variables();
        for pt in &pts {
            prop_assert_eq!(d.contains(pt), eval_quantified_oracle(&p.formula, &named(&vars, pt)).unwrap());
        }
    }

    #[test]
    fn small_scalars_agree(f in doag_formula(XY, 2), pts in prop::collection::vec(point(2), 8)) {
        let text = format!("theory doag\nvars x: x1 ; y: y1\nformula {f}");
        let big = parse(&text).unwrap();
        let small = parse_as::<SmallRational>(&text).unwrap();
        let vars = big.partition.variables();
        let db = to_cells(&big.formula, &vars).unwrap();
        let ds = to_cells(&small.formula, &vars).unwrap();
        for pt in &pts {
            let sp: Vec<SmallRational> = pt
                .iter()
                .map(|q| SmallRational::new(q.numer().try_into().unwrap(), q.denom().try_into().unwrap()))
                .collect();
            prop_assert_eq!(db.contains(pt), ds.contains(&sp));
        }
    }
}
