//! Realizing formulas for Δ-class-preserving operations.
//!
//! For every argument tuple α with value δ = f(α) the selector
//! `C^α = □(p1 ∼ α1) & .. & □(pn ∼ αn) & δ` takes the value δ at α, σ ∧ δ on
//! other tuples in the same Δ-classes, and 0 elsewhere. The disjunction of
//! all 4^n selectors then realizes f.

use thiserror::Error;

use crate::algebra::Element;
use crate::formula::{table, Formula, FuncTable};
use crate::preservation::{
    delta_pairing_relation, find_violation, preserves_delta_pairing, ViolationWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("operation does not preserve Δx = Δy ({0}), so no formula realizes it")]
    NotRepresentable(ViolationWitness),
    #[error("arity-0 tables are realized by a constant formula directly")]
    ZeroArity,
    #[error("expected {expected} variable name(s), got {got}")]
    VariableCount { expected: usize, got: usize },
}

/// An argument tuple together with the value the operation takes there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSelector {
    pub alpha: Vec<Element>,
    pub delta: Element,
}

/// The selector formula `(&_i □(p_i ∼ α_i)) & δ`.
pub fn c_alpha(sel: &AlphaSelector, vars: &[String]) -> Result<Formula, SynthesisError> {
    if vars.len() != sel.alpha.len() || vars.is_empty() {
        return Err(SynthesisError::VariableCount {
            expected: sel.alpha.len(),
            got: vars.len(),
        });
    }
    let boxes = vars
        .iter()
        .zip(&sel.alpha)
        .map(|(v, &a)| Formula::var(v).equiv(Formula::constant(a)).boxed());
    let conj = Formula::conjunction(boxes).expect("at least one variable");
    Ok(conj.and(Formula::constant(sel.delta)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Drop selectors whose δ is 0; they never contribute to the join.
    pub drop_zero_disjuncts: bool,
}

/// Default variable names `p1..pn`.
pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

/// Realizing formula over `p1..pn`.
pub fn synthesize(f: &FuncTable) -> Result<Formula, SynthesisError> {
    synthesize_with(f, &default_vars(f.arity()), SynthesisOptions::default())
}

pub fn synthesize_with(
    f: &FuncTable,
    vars: &[String],
    opts: SynthesisOptions,
) -> Result<Formula, SynthesisError> {
    let n = f.arity();
    if n == 0 {
        return Err(SynthesisError::ZeroArity);
    }
    if vars.len() != n {
        return Err(SynthesisError::VariableCount {
            expected: n,
            got: vars.len(),
        });
    }
    if !preserves_delta_pairing(f) {
        let w = find_violation(f, &delta_pairing_relation()).expect("fast check found a violation");
        return Err(SynthesisError::NotRepresentable(w));
    }
    let mut alpha = vec![Element::Zero; n];
    let mut disjuncts = Vec::with_capacity(f.len());
    for (idx, &delta) in f.entries().iter().enumerate() {
        if opts.drop_zero_disjuncts && delta == Element::Zero {
            continue;
        }
        table::decode_index(idx, &mut alpha);
        let sel = AlphaSelector {
            alpha: alpha.clone(),
            delta,
        };
        disjuncts.push(c_alpha(&sel, vars)?);
    }
    let formula = Formula::disjunction(disjuncts).unwrap_or(Formula::constant(Element::Zero));
    if opts.drop_zero_disjuncts {
        // the pass is cosmetic; confirm it changed nothing semantically
        let t = formula
            .truth_table(vars)
            .expect("synthesized formula only uses the given variables");
        assert_eq!(&t, f, "dropping zero disjuncts changed the realized table");
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element::*;
    use crate::algebra::Connective;
    use crate::preservation::{all_unary_tables, delta_preserving_unary_tables};
    use crate::formula::Valuation;

    fn p() -> Vec<String> {
        vec!["p".to_string()]
    }

    #[test]
    fn selector_cases() {
        let sel = AlphaSelector {
            alpha: vec![Zero],
            delta: Sigma,
        };
        let c = c_alpha(&sel, &p()).unwrap();
        let at = |x| c.evaluate(&Valuation::new().with("p", x)).unwrap();
        assert_eq!(at(Zero), Sigma);
        assert_eq!(at(Rho), Sigma);
        assert_eq!(at(One), Zero);
        assert_eq!(at(Sigma), Zero);
        assert!(c_alpha(&sel, &[]).is_err());
    }

    #[test]
    fn selector_near_miss_is_sigma_meet_delta() {
        // exhaustive over n = 2
        let vars = vec!["a".to_string(), "b".to_string()];
        for a0 in Element::ALL {
            for a1 in Element::ALL {
                for delta in Element::ALL {
                    let sel = AlphaSelector {
                        alpha: vec![a0, a1],
                        delta,
                    };
                    let t = c_alpha(&sel, &vars).unwrap().truth_table(&vars).unwrap();
                    for (args, v) in t.rows() {
                        let same_class = args.iter().zip(&sel.alpha).all(|(x, y)| x.delta() == y.delta());
                        let expected = if args == sel.alpha {
                            delta
                        } else if same_class {
                            Sigma.and(delta)
                        } else {
                            Zero
                        };
                        assert_eq!(v, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn final_collapse_identity() {
        for d in Element::ALL {
            for d2 in Element::ALL {
                if d.delta_class() == d2.delta_class() {
                    assert_eq!(d.or(Zero).or(Sigma.and(d2)), d);
                }
            }
        }
    }

    #[test]
    fn connectives_round_trip() {
        for c in Connective::ALL {
            let t = FuncTable::connective(c);
            let f = synthesize(&t).unwrap();
            assert_eq!(f.truth_table(&default_vars(t.arity())).unwrap(), t);
        }
        let id = synthesize(&FuncTable::identity()).unwrap();
        assert_eq!(id.truth_table(&default_vars(1)).unwrap(), FuncTable::identity());
    }

    #[test]
    fn every_unary_table() {
        for t in delta_preserving_unary_tables() {
            let f = synthesize(&t).unwrap();
            assert_eq!(f.truth_table(&default_vars(1)).unwrap(), t);
            let g = synthesize_with(&t, &p(), SynthesisOptions { drop_zero_disjuncts: true }).unwrap();
            assert_eq!(g.truth_table(&p()).unwrap(), t);
        }
        for t in all_unary_tables().filter(|t| !preserves_delta_pairing(t)) {
            assert!(matches!(synthesize(&t), Err(SynthesisError::NotRepresentable(_))));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(synthesize(&FuncTable::constant(0, One)), Err(SynthesisError::ZeroArity));
        assert!(matches!(
            synthesize_with(&FuncTable::identity(), &[], SynthesisOptions::default()),
            Err(SynthesisError::VariableCount { expected: 1, got: 0 })
        ));
        let err = synthesize(&FuncTable::unary([Zero, Sigma, Zero, Zero])).unwrap_err();
        let SynthesisError::NotRepresentable(w) = err else { panic!() };
        assert_ne!(w.image[0].delta(), w.image[1].delta());
    }

    #[test]
    fn constant_zero_with_dropping() {
        let t = FuncTable::constant(2, Zero);
        let vars = default_vars(2);
        let f = synthesize_with(&t, &vars, SynthesisOptions { drop_zero_disjuncts: true }).unwrap();
        assert_eq!(f, Formula::constant(Zero));
    }
}
