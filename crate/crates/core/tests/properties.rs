use std::collections::HashMap;
use std::sync::Arc;

use magari4::formula::equivalent;
use magari4::preservation::{
    all_unary_tables, builtin_relation, find_violation, preserves, preserves_delta_pairing,
};
use magari4::{Element, Formula, FuncTable, Valuation};
use proptest::prelude::*;

const VARS: [&str; 3] = ["p", "q", "r"];

fn element() -> impl Strategy<Value = Element> {
    prop::sample::select(Element::ALL.to_vec())
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop::sample::select(VARS.to_vec()).prop_map(Formula::var),
        element().prop_map(Formula::constant),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::delta),
            inner.clone().prop_map(Formula::boxed),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.imp(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.equiv(b)),
        ]
    })
}

fn valuation() -> impl Strategy<Value = Valuation> {
    (element(), element(), element())
        .prop_map(|(a, b, c)| Valuation::new().with("p", a).with("q", b).with("r", c))
}

fn vars() -> Vec<String> {
    VARS.iter().map(|s| s.to_string()).collect()
}

proptest! {
    #[test]
    fn printing_round_trips(f in formula()) {
        let printed = f.to_string();
        let back: Formula = printed.parse().unwrap();
        prop_assert_eq!(back.truth_table(&vars()).unwrap(), f.truth_table(&vars()).unwrap());
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn substitution_commutes_with_evaluation(f in formula(), g in formula(), v in valuation()) {
        let substituted = f.substitute("p", &g);
        let gv = g.evaluate(&v).unwrap();
        let shifted = v.clone().with("p", gv);
        prop_assert_eq!(substituted.evaluate(&v).unwrap(), f.evaluate(&shifted).unwrap());
    }

    #[test]
    fn simultaneous_substitution_matches_composition(f in formula(), g in formula(), h in formula()) {
        // f[p := g, q := h] has the table of f composed with (g, h, r)
        let map: HashMap<&str, Arc<Formula>> =
            [("p", Arc::new(g.clone())), ("q", Arc::new(h.clone()))].into_iter().collect();
        let lhs = f.substitute_all(&map).truth_table(&vars()).unwrap();
        let ft = f.truth_table(&vars()).unwrap();
        let (gt, ht) = (g.truth_table(&vars()).unwrap(), h.truth_table(&vars()).unwrap());
        let rt = FuncTable::projection(3, 2);
        prop_assert_eq!(lhs, ft.compose(&[&gt, &ht, &rt]).unwrap());
    }

    #[test]
    fn equivalence_is_a_congruence(f in formula(), g in formula(), ctx in formula()) {
        if equivalent(&f, &g) {
            prop_assert!(equivalent(&ctx.substitute("q", &f), &ctx.substitute("q", &g)));
        }
        prop_assert!(equivalent(&f, &f.clone().not().not()));
        prop_assert!(equivalent(&f.clone().and(g.clone()), &g.clone().and(f.clone())));
    }

    #[test]
    fn formulas_preserve_delta_pairing(f in formula()) {
        prop_assert!(preserves_delta_pairing(&f.truth_table(&vars()).unwrap()));
    }
}

#[test]
fn witness_search_agrees_with_preservation() {
    for t in all_unary_tables() {
        for i in 1..=12 {
            let r = builtin_relation(i).unwrap();
            let w = find_violation(&t, &r);
            assert_eq!(w.is_none(), preserves(&t, &r), "{t} R{i}");
            if let Some(w) = w {
                assert!(!r.contains(&w.image));
                assert_eq!(t.get(&w.row_arguments(0)), w.image[0]);
            }
        }
    }
}
