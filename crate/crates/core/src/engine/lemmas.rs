//! The five lemmas behind constant expressibility, as constructions over
//! derivations. Every intermediate claim is checked on realized tables
//! before it is recorded.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::system::TwelveSystem;
use super::term::{Definition, Derivation, Term, TraceStep};
use super::EngineError;
use crate::algebra::Element::{self, One, Rho, Sigma, Zero};
use crate::preservation::builtin_relation;

fn low(x: Element) -> bool {
    matches!(x, Zero | Rho)
}

fn high(x: Element) -> bool {
    matches!(x, Sigma | One)
}

fn set_name(xs: &[Element]) -> String {
    let names: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", names.join(","))
}

/// Accumulates the verified steps of one construction.
#[derive(Debug, Default)]
struct Trace(Vec<TraceStep>);

impl Trace {
    fn from_inputs(inputs: &[&Derivation]) -> Self {
        let mut t = Trace::default();
        for d in inputs {
            t.absorb(d.trace());
        }
        t
    }

    fn absorb(&mut self, steps: &[TraceStep]) {
        for s in steps {
            if !self.0.contains(s) {
                self.0.push(s.clone());
            }
        }
    }

    fn check(&mut self, step: &str, claim: String, holds: bool) -> Result<(), EngineError> {
        if !holds {
            return Err(EngineError::InternalProofCheckFailed {
                step: step.to_string(),
                claim,
            });
        }
        self.0.push(TraceStep {
            step: step.to_string(),
            claim,
        });
        Ok(())
    }

    fn note(&mut self, step: &str, claim: String) {
        self.0.push(TraceStep {
            step: step.to_string(),
            claim,
        });
    }

    fn finish(self, def: Arc<Definition>) -> Derivation {
        Derivation::new(def, self.0)
    }
}

fn precondition(holds: bool, index: Option<usize>, reason: impl Into<String>) -> Result<(), EngineError> {
    if holds {
        Ok(())
    } else {
        Err(EngineError::PreconditionViolated {
            index,
            reason: reason.into(),
        })
    }
}

fn require_unary(d: &Derivation, role: &str) -> Result<(), EngineError> {
    precondition(
        d.realized().arity() == 1,
        None,
        format!("{role} must be a unary derivation, got arity {}", d.realized().arity()),
    )
}

fn p() -> Arc<Term> {
    Term::var("p")
}

/// `d(p)` as a term.
fn apply(d: &Arc<Definition>, arg: Arc<Term>) -> Arc<Term> {
    Term::call(d, vec![arg])
}

/// Builds `F_i(args)` where each argument is chosen from the witness column
/// by `pick`.
fn instantiate<T>(
    index: usize,
    columns: &[Vec<Element>],
    mut pick: impl FnMut(&[Element]) -> Option<T>,
    to_term: impl Fn(T) -> Arc<Term>,
) -> Result<Arc<Term>, EngineError> {
    let args = columns
        .iter()
        .map(|col| {
            pick(col).map(&to_term).ok_or_else(|| EngineError::InternalProofCheckFailed {
                step: format!("F{index}"),
                claim: format!("witness column {col:?} has an admissible argument"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Term::member(index, args))
}

/// A(p) = F1(p, .., p) with A[0] ∈ {σ,1}.
pub fn lemma1_a(sys: &TwelveSystem) -> Result<Derivation, EngineError> {
    let (m, w) = sys.violation(1)?;
    let mut trace = Trace::default();
    trace.check(
        "Lemma 1",
        format!("F1 witness {} has arguments in {{0,r}} and image in {{s,1}}", w),
        w.selected_columns.iter().all(|c| low(c[0])) && high(w.image[0]),
    )?;
    let def = Definition::new("A", &["p"], Term::member(1, vec![p(); m.arity()]), sys);
    trace.check("A", format!("A(p) = F1(p, .., p) and A[0] = {} in {{s,1}}", def.at(Zero)), high(def.at(Zero)))?;
    Ok(trace.finish(def))
}

/// B(p) = F2(p, .., p) with B[1] ∈ {0,ρ}.
pub fn lemma2_b(sys: &TwelveSystem) -> Result<Derivation, EngineError> {
    let (m, w) = sys.violation(2)?;
    let mut trace = Trace::default();
    trace.check(
        "Lemma 2",
        format!("F2 witness {} has arguments in {{s,1}} and image in {{0,r}}", w),
        w.selected_columns.iter().all(|c| high(c[0])) && low(w.image[0]),
    )?;
    let def = Definition::new("B", &["p"], Term::member(2, vec![p(); m.arity()]), sys);
    trace.check("B", format!("B(p) = F2(p, .., p) and B[1] = {} in {{0,r}}", def.at(One)), low(def.at(One)))?;
    Ok(trace.finish(def))
}

fn require_a(a: &Derivation) -> Result<(), EngineError> {
    require_unary(a, "A")?;
    precondition(high(a.definition().at(Zero)), None, "A[0] must lie in {s,1}")
}

fn require_b(b: &Derivation) -> Result<(), EngineError> {
    require_unary(b, "B")?;
    precondition(low(b.definition().at(One)), None, "B[1] must lie in {0,r}")
}

/// A constant in {0, ρ} from A, B with B[σ] = B[1], and F12.
pub fn lemma3(a: &Derivation, b: &Derivation, sys: &TwelveSystem) -> Result<Derivation, EngineError> {
    require_a(a)?;
    require_b(b)?;
    let bd = b.definition();
    precondition(
        bd.at(Sigma) == bd.at(One),
        None,
        format!("{}[s] must equal {}[1] (use lemma 4 otherwise)", bd.name, bd.name),
    )?;
    let ad = a.definition();
    let mut trace = Trace::from_inputs(&[a, b]);
    let bn = bd.name.clone();

    if low(bd.at(Zero)) {
        trace.note("Lemma 3 case 1", format!("{bn}[0] = {} in {{0,r}}", bd.at(Zero)));
        let body = apply(bd, apply(ad, apply(bd, p())));
        let k = Definition::new("K", &["p"], body, sys);
        let value = k.table.constant_value();
        trace.check(
            "K",
            format!("K(p) = {bn}(A({bn}(p))) is the constant {}", value.map_or("?".to_string(), |v| v.to_string())),
            value.is_some_and(low),
        )?;
        return Ok(trace.finish(k));
    }

    trace.note("Lemma 3 case 2", format!("{bn}[0] = {} in {{s,1}}", bd.at(Zero)));
    let (f12, w) = sys.violation(12)?;
    let r12 = builtin_relation(12).expect("R12 exists");
    trace.check(
        "F12",
        format!("witness {w}: argument pairs differ in Δ-class, images agree"),
        w.selected_columns.iter().all(|c| c[0].delta() != c[1].delta())
            && w.image[0].delta() == w.image[1].delta(),
    )?;
    // p1..p8 follow the column order of the R12 matrix
    let params: Vec<String> = (1..=8).map(|i| format!("p{i}")).collect();
    let body = instantiate(
        12,
        &w.selected_columns,
        |col| r12.columns().iter().position(|c| c == col),
        |k| Term::var(&params[k]),
    )?;
    debug_assert_eq!(f12.arity(), w.selected_columns.len());
    let param_refs: Vec<&str> = params.iter().map(String::as_str).collect();
    let d = Definition::new("D", &param_refs, body, sys);
    let u = d.table.get(&[Zero, Zero, Rho, Rho, Sigma, Sigma, One, One]);
    let v = d.table.get(&[Sigma, One, Sigma, One, Zero, Rho, Zero, Rho]);
    trace.check(
        "D",
        format!("(D[0,0,r,r,s,s,1,1], D[s,1,s,1,0,r,0,r]) = ({u},{v}) lies in Δx = Δy"),
        u.delta() == v.delta(),
    )?;

    let (pp, qq) = (Term::var("p"), Term::var("q"));
    let d_star_body = Term::call(
        &d,
        vec![pp.clone(), pp.clone(), pp.clone(), pp.clone(), qq.clone(), qq.clone(), qq.clone(), qq.clone()],
    );
    let d_star = Definition::new("D*", &["p", "q"], d_star_body, sys);
    let (s01, s10) = (d_star.table.get(&[Zero, One]), d_star.table.get(&[One, Zero]));
    trace.check(
        "D*",
        format!("(D*[0,1], D*[1,0]) = ({s01},{s10}) lies in Δx = Δy"),
        s01.delta() == s10.delta(),
    )?;

    let pq = vec![Term::var("p"), Term::var("q")];
    let d_prime_body = if low(s01) {
        Term::call(&d_star, pq)
    } else {
        apply(bd, Term::call(&d_star, pq))
    };
    let d_prime = Definition::new("D'", &["p", "q"], d_prime_body, sys);
    let (t01, t10) = (d_prime.table.get(&[Zero, One]), d_prime.table.get(&[One, Zero]));
    trace.check(
        "D'",
        format!("{{D'[0,1], D'[1,0]}} = {{{t01},{t10}}} is within {{0,r}}"),
        low(t01) && low(t10),
    )?;

    let inner = apply(bd, Term::call(&d_prime, vec![p(), apply(bd, p())]));
    let g = Definition::new("G", &["p"], inner, sys);
    trace.check(
        "G",
        format!("G(p) = {bn}(D'(p, {bn}(p))) takes values in {{s,1}}: {}", g.table),
        g.table.entries().iter().all(|&x| high(x)),
    )?;
    let k = Definition::new("K", &["p"], apply(bd, apply(&g, p())), sys);
    let value = k.table.constant_value();
    trace.check(
        "K",
        format!("K(p) = {bn}(G(p)) is the constant {}", value.map_or("?".to_string(), |v| v.to_string())),
        value.is_some_and(low),
    )?;
    Ok(trace.finish(k))
}

/// A constant in {0, ρ} from A, B with B[σ] ≠ B[1], and F3, F4, F7, F11, F12.
pub fn lemma4(a: &Derivation, b: &Derivation, sys: &TwelveSystem) -> Result<Derivation, EngineError> {
    require_a(a)?;
    require_b(b)?;
    let bd = b.definition();
    precondition(
        bd.at(Sigma) != bd.at(One),
        None,
        format!("{}[s] must differ from {}[1] (use lemma 3 otherwise)", bd.name, bd.name),
    )?;
    if bd.at(One) == Rho {
        lemma4_case1(a, b, sys)
    } else {
        lemma4_case2(a, b, sys)
    }
}

fn lemma4_case1(a: &Derivation, b: &Derivation, sys: &TwelveSystem) -> Result<Derivation, EngineError> {
    let bd = b.definition();
    let bn = bd.name.clone();
    let mut trace = Trace::from_inputs(&[a, b]);
    trace.check(
        "Lemma 4 case 1",
        format!("{bn}[1] = r and {bn}[s] = {}", bd.at(Sigma)),
        bd.at(One) == Rho && bd.at(Sigma) == Zero,
    )?;

    let (_, w3) = sys.violation(3)?;
    trace.check(
        "F3",
        format!("witness {w3} has arguments in {{0,s}} and image in {{r,1}}"),
        w3.selected_columns.iter().all(|c| matches!(c[0], Zero | Sigma)) && matches!(w3.image[0], Rho | One),
    )?;
    let body = instantiate(
        3,
        &w3.selected_columns,
        |col| match col[0] {
            Zero => Some(apply(bd, p())),
            Sigma => Some(p()),
            _ => None,
        },
        |t| t,
    )?;
    let e = Definition::new("E", &["p"], body, sys);
    trace.check("E", format!("E[s] = {} in {{r,1}}", e.at(Sigma)), matches!(e.at(Sigma), Rho | One))?;
    let e_star_body = if e.at(Sigma) == Rho {
        apply(&e, p())
    } else {
        apply(bd, apply(&e, p()))
    };
    let e_star = Definition::new("E*", &["p"], e_star_body, sys);
    trace.check("E*", format!("E*[s] = {}", e_star.at(Sigma)), e_star.at(Sigma) == Rho)?;
    trace.check("E*", format!("E*[1] = {} in {{0,r}}", e_star.at(One)), low(e_star.at(One)))?;

    if e_star.at(One) == Rho {
        trace.note("Lemma 4 case 1.1", "E*[s] = E*[1] = r; continue with E* as B".into());
        let e_der = trace.finish(e_star);
        return lemma3(a, &e_der, sys);
    }

    trace.note("Lemma 4 case 1.2", "E*[1] = 0".into());
    let (_, w7) = sys.violation(7)?;
    trace.check(
        "F7",
        format!("witness {w7} has arguments in {{0,r,s}} and image 1"),
        w7.selected_columns.iter().all(|c| c[0] != One) && w7.image[0] == One,
    )?;
    let body = instantiate(
        7,
        &w7.selected_columns,
        |col| match col[0] {
            Zero => Some(apply(bd, p())),
            Rho => Some(apply(&e_star, p())),
            Sigma => Some(p()),
            One => None,
        },
        |t| t,
    )?;
    let h = Definition::new("H", &["p"], body, sys);
    trace.check("H", format!("H[s] = {}", h.at(Sigma)), h.at(Sigma) == One)?;
    trace.check("H", format!("H[1] = {} in {{s,1}}", h.at(One)), high(h.at(One)))?;

    if h.at(One) == One {
        let bh = Definition::new(format!("{bn}H"), &["p"], apply(bd, apply(&h, p())), sys);
        trace.check(
            "Lemma 4 case 1.2a",
            format!("H[1] = 1, so {bn}(H(p)) has [s] = [1] = {}", bh.at(One)),
            bh.at(Sigma) == bh.at(One) && low(bh.at(One)),
        )?;
        let bh_der = trace.finish(bh);
        return lemma3(a, &bh_der, sys);
    }

    trace.note("Lemma 4 case 1.2b", "H[1] = s".into());
    let (_, w11) = sys.violation(11)?;
    trace.check(
        "F11",
        format!("witness {w11}: columns are in R11 and both images coincide"),
        w11.image[0] == w11.image[1],
    )?;
    // J_i needs J_i[sigma] = gamma_i and J_i[1] = delta_i; the (1, sigma)
    // profile is met by H, not by B
    let body = instantiate(
        11,
        &w11.selected_columns,
        |col| match (col[0], col[1]) {
            (Zero, Rho) => Some(apply(bd, p())),
            (Rho, Zero) => Some(apply(&e_star, p())),
            (Sigma, One) => Some(p()),
            (One, Sigma) => Some(apply(&h, p())),
            _ => None,
        },
        |t| t,
    )?;
    if let Term::Member { args, .. } = &*body {
        let vars = vec!["p".to_string()];
        let ok = args.iter().zip(&w11.selected_columns).all(|(t, col)| {
            let tt = super::term::term_table(t, &vars, sys);
            tt.get(&[Sigma]) == col[0] && tt.get(&[One]) == col[1]
        });
        trace.check(
            "J",
            "each argument J_i has J_i[s] = gamma_i and J_i[1] = delta_i ((1,s) served by H)".to_string(),
            ok,
        )?;
    }
    let j = Definition::new("J", &["p"], body, sys);
    trace.check("J", format!("J[s] = J[1] = {}", j.at(One)), j.at(Sigma) == j.at(One))?;
    let j_star_body = if low(j.at(One)) {
        apply(&j, p())
    } else {
        apply(bd, apply(&j, p()))
    };
    let j_star = Definition::new("J*", &["p"], j_star_body, sys);
    trace.check(
        "J*",
        format!("J*[s] = J*[1] = {} in {{0,r}}", j_star.at(One)),
        j_star.at(Sigma) == j_star.at(One) && low(j_star.at(One)),
    )?;
    let j_der = trace.finish(j_star);
    lemma3(a, &j_der, sys)
}

fn lemma4_case2(a: &Derivation, b: &Derivation, sys: &TwelveSystem) -> Result<Derivation, EngineError> {
    let bd = b.definition();
    let bn = bd.name.clone();
    let mut trace = Trace::from_inputs(&[a, b]);
    trace.check(
        "Lemma 4 case 2",
        format!("{bn}[1] = 0 and {bn}[s] = {}", bd.at(Sigma)),
        bd.at(One) == Zero && bd.at(Sigma) == Rho,
    )?;
    let (_, w4) = sys.violation(4)?;
    trace.check(
        "F4",
        format!("witness {w4} has arguments in {{0,1}} and image in {{r,s}}"),
        w4.selected_columns.iter().all(|c| matches!(c[0], Zero | One)) && matches!(w4.image[0], Rho | Sigma),
    )?;
    let body = instantiate(
        4,
        &w4.selected_columns,
        |col| match col[0] {
            Zero => Some(apply(bd, p())),
            One => Some(p()),
            _ => None,
        },
        |t| t,
    )?;
    let s = Definition::new("S", &["p"], body, sys);
    trace.check("S", format!("S[1] = {} in {{r,s}}", s.at(One)), matches!(s.at(One), Rho | Sigma))?;
    let s_star_body = if s.at(One) == Rho {
        apply(&s, p())
    } else {
        apply(bd, apply(&s, p()))
    };
    let s_star = Definition::new("S*", &["p"], s_star_body, sys);
    trace.check("S*", format!("S*[1] = {}", s_star.at(One)), s_star.at(One) == Rho)?;
    trace.check("S*", format!("S*[s] = {} in {{0,r}}", s_star.at(Sigma)), low(s_star.at(Sigma)))?;
    let sigma_value = s_star.at(Sigma);
    let s_der = trace.finish(s_star);
    if sigma_value == Rho {
        lemma3(a, &s_der, sys)
    } else {
        lemma4_case1(a, &s_der, sys)
    }
}

fn constant_name(c: Element) -> String {
    format!("c{}", c.token())
}

/// All four constants from a constant k in {0, ρ}, A, and F3..F10.
pub fn lemma5(
    k: &Derivation,
    a: &Derivation,
    sys: &TwelveSystem,
) -> Result<BTreeMap<Element, Derivation>, EngineError> {
    require_a(a)?;
    require_unary(k, "k")?;
    let c0 = k.realized().constant_value();
    precondition(
        c0.is_some_and(low),
        None,
        format!("k must realize the constant 0 or r, got table {}", k.realized()),
    )?;
    let c0 = c0.expect("checked above");
    let mut trace = Trace::from_inputs(&[k, a]);
    // each constant keeps the trace up to its own construction
    let mut have: BTreeMap<Element, Arc<Definition>> = BTreeMap::new();
    let mut upto: BTreeMap<Element, usize> = BTreeMap::new();
    let kd = Definition::new(constant_name(c0), &["p"], apply(k.definition(), p()), sys);
    trace.check(&constant_name(c0), format!("{} = K(p) is the constant {}", kd.name, c0), kd.table.constant_value() == Some(c0))?;
    have.insert(c0, kd.clone());
    upto.insert(c0, trace.0.len());

    let c2_def = Definition::new("c?", &["p"], apply(a.definition(), apply(&kd, p())), sys);
    let c2 = c2_def.table.constant_value();
    let c2 = match c2 {
        Some(v) if high(v) => v,
        _ => {
            return Err(EngineError::InternalProofCheckFailed {
                step: "Lemma 5".into(),
                claim: format!("A applied to {} is a constant in {{s,1}}", c0),
            })
        }
    };
    let c2_def = Definition::new(constant_name(c2), &["p"], c2_def.body.clone(), sys);
    trace.check(
        &c2_def.name,
        format!("{} = A({}(p)) is the constant {}", c2_def.name, kd.name, c2),
        c2_def.table.constant_value() == Some(c2),
    )?;
    have.insert(c2, c2_def);
    upto.insert(c2, trace.0.len());

    // pairs use F3..F6, triples F7..F10; the relation of each is exactly
    // the set of constants at hand
    for _ in 0..2 {
        let current: Vec<Element> = have.keys().copied().collect();
        let index = (3..=10)
            .find(|&i| {
                let r = builtin_relation(i).expect("valid");
                r.columns().len() == current.len() && current.iter().all(|&x| r.contains(&[x]))
            })
            .ok_or_else(|| EngineError::InternalProofCheckFailed {
                step: "Lemma 5".into(),
                claim: format!("constant system {} matches one of R3..R10", set_name(&current)),
            })?;
        let (_, w) = sys.violation(index)?;
        let body = instantiate(index, &w.selected_columns, |col| have.get(&col[0]).cloned(), |d| apply(&d, p()))?;
        let new_value = w.image[0];
        let def = Definition::new(constant_name(new_value), &["p"], body, sys);
        trace.check(
            &def.name,
            format!(
                "from {} via F{index}: {} is the constant {} outside the system",
                set_name(&current),
                def.name,
                new_value
            ),
            def.table.constant_value() == Some(new_value) && !have.contains_key(&new_value),
        )?;
        have.insert(new_value, def);
        upto.insert(new_value, trace.0.len());
    }

    let steps = trace.0;
    Ok(have
        .into_iter()
        .map(|(c, def)| (c, Derivation::new(def, steps[..upto[&c]].to_vec())))
        .collect())
}

/// Runs lemmas 1 and 2, then 3 or 4, then 5.
pub fn derive_all_constants(sys: &TwelveSystem) -> Result<BTreeMap<Element, Derivation>, EngineError> {
    if let Some(i) = sys.first_gap() {
        sys.violation(i)?;
    }
    let (a, _, k) = derive_small_constant(sys)?;
    lemma5(&k, &a, sys)
}

/// Lemmas 1 and 2 followed by 3 or 4: returns A, B and a constant in {0, ρ}.
pub fn derive_small_constant(sys: &TwelveSystem) -> Result<(Derivation, Derivation, Derivation), EngineError> {
    let a = lemma1_a(sys)?;
    let b = lemma2_b(sys)?;
    let bd = b.definition();
    let k = if bd.at(Sigma) == bd.at(One) {
        lemma3(&a, &b, sys)?
    } else {
        lemma4(&a, &b, sys)?
    };
    Ok((a, b, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Member;
    use crate::formula::Formula;

    fn member(label: &str, src: &str) -> Member {
        Member::from_formula(label, src.parse::<Formula>().unwrap()).unwrap()
    }

    /// The canned system with some members replaced.
    fn with(replace: &[(usize, &str)]) -> TwelveSystem {
        let base = TwelveSystem::canned();
        let members = (1..=12).map(|i| {
            let m = match replace.iter().find(|(j, _)| *j == i) {
                Some((_, src)) => member(&format!("F{i}"), src),
                None => base.member(i).unwrap().clone(),
            };
            (i, m)
        });
        TwelveSystem::new(members).unwrap()
    }

    fn unary(d: &Derivation) -> Vec<Element> {
        Element::ALL.iter().map(|&x| d.definition().at(x)).collect()
    }

    #[test]
    fn canned_system_is_complete() {
        let sys = TwelveSystem::canned();
        assert_eq!(sys.first_gap(), None);
        let all = derive_all_constants(&sys).unwrap();
        assert_eq!(all.len(), 4);
        for (c, d) in &all {
            assert_eq!(d.realized().constant_value(), Some(*c));
            assert!(d.verify_expansion(&sys).unwrap());
        }
    }

    #[test]
    fn lemma1_examples() {
        let a = lemma1_a(&with(&[(1, "#p")])).unwrap();
        assert_eq!(unary(&a), vec![Element::Sigma, Element::Sigma, One, One]);
        let a = lemma1_a(&with(&[(1, "#p | q")])).unwrap();
        assert_eq!(a.definition().at(Zero), Sigma);
    }

    #[test]
    fn lemma2_examples() {
        let b = lemma2_b(&with(&[(2, "~p")])).unwrap();
        assert_eq!(unary(&b), vec![One, Sigma, Rho, Zero]);
        let b = lemma2_b(&with(&[(2, "~#p")])).unwrap();
        assert_eq!(unary(&b), vec![Rho, Rho, Zero, Zero]);
    }

    #[test]
    fn lemma3_case1_gives_zero() {
        let sys = with(&[(1, "#p"), (2, "~#p")]);
        let a = lemma1_a(&sys).unwrap();
        let b = lemma2_b(&sys).unwrap();
        let k = lemma3(&a, &b, &sys).unwrap();
        assert_eq!(k.realized().constant_value(), Some(Zero));
        assert!(k.trace().iter().any(|s| s.step == "Lemma 3 case 1"));
    }

    #[test]
    fn lemma3_rejects_unequal_b() {
        let sys = with(&[(2, "~p")]);
        let a = lemma1_a(&sys).unwrap();
        let b = lemma2_b(&sys).unwrap();
        assert!(matches!(lemma3(&a, &b, &sys), Err(EngineError::PreconditionViolated { index: None, .. })));
    }

    #[test]
    fn lemma4_case2_with_negation() {
        let sys = with(&[(2, "~p")]);
        let a = lemma1_a(&sys).unwrap();
        let b = lemma2_b(&sys).unwrap();
        let k = lemma4(&a, &b, &sys).unwrap();
        assert!(k.realized().constant_value().is_some_and(low));
        assert!(k.trace().iter().any(|s| s.step == "Lemma 4 case 2"));
        let b_eq = lemma2_b(&with(&[(2, "~#p")])).unwrap();
        assert!(matches!(lemma4(&a, &b_eq, &sys), Err(EngineError::PreconditionViolated { .. })));
    }

    #[test]
    fn lemma5_from_zero_and_rho() {
        let sys = TwelveSystem::canned();
        let a = lemma1_a(&sys).unwrap();
        // constant 0 from the canned system: F5 = p & q applied to (p, F2(p))
        let zero_body = Term::member(5, vec![p(), Term::member(2, vec![p()])]);
        let zero = Derivation::new(Definition::new("K", &["p"], zero_body, &sys), vec![]);
        assert_eq!(zero.realized().constant_value(), Some(Zero));
        let all = lemma5(&zero, &a, &sys).unwrap();
        assert_eq!(all.keys().copied().collect::<Vec<_>>(), Element::ALL.to_vec());
        // ρ = ¬Δ0 = F2(F1(K(p)))
        let k = Definition::new("K", &["p"], zero.term().clone(), &sys);
        let rho_body = Term::member(2, vec![Term::member(1, vec![Term::call(&k, vec![p()])])]);
        let rho = Derivation::new(Definition::new("K", &["p"], rho_body, &sys), vec![]);
        assert_eq!(rho.realized().constant_value(), Some(Rho));
        let all = lemma5(&rho, &a, &sys).unwrap();
        assert_eq!(all.len(), 4);
        for (c, d) in &all {
            assert_eq!(d.realized().constant_value(), Some(*c));
        }
        // a constant σ is not an admissible k
        let sigma_body = Term::member(1, vec![zero.term().clone()]);
        let sigma = Derivation::new(Definition::new("K", &["p"], sigma_body, &sys), vec![]);
        assert_eq!(sigma.realized().constant_value(), Some(Sigma));
        assert!(matches!(lemma5(&sigma, &a, &sys), Err(EngineError::PreconditionViolated { .. })));
    }

    #[test]
    fn projection_members_are_reported_by_index() {
        for i in 1..=12 {
            let sys = with(&[(i, "p")]);
            assert_eq!(sys.first_gap(), Some(i));
            match derive_all_constants(&sys) {
                Err(EngineError::PreconditionViolated { index, .. }) => assert_eq!(index, Some(i)),
                other => panic!("F{i}: {other:?}"),
            }
        }
    }
}
