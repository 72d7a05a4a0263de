//! One function per subcommand. Each parses its inputs, calls the library and
//! formats the answer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use magari4::algebra::{gl4_axiom_report, magari_identity_report, GL4_AXIOM};
use magari4::closure::{closure_fragment_with, ClosureError, ClosureLimits, SystemSigma};
use magari4::engine::{derive_all_constants, Derivation, EngineError, Member, TwelveSystem};
use magari4::formula::{counter_valuation, equivalent};
use magari4::preservation::{
    all_unary_tables, builtin_relation, classify as classify_table, delta_preserving_unary_tables, find_violation,
    i_op, i_op_index, preserves_delta_pairing, RelationMatrix, UnaryOpIndex, ViolationWitness,
};
use magari4::synthesis::{default_vars, synthesize_with, SynthesisError, SynthesisOptions};
use magari4::{Element, Formula, FuncTable, Valuation};
use serde_json::{json, Value};

use crate::sigma::{parse_system, Definition};
use crate::{CliError, Outcome};

const MAX_SYNTHESIS_ARITY: usize = 4;

fn formula(src: &str) -> Result<Formula, CliError> {
    src.parse().map_err(|e| CliError::usage(format!("{e}")))
}

fn table_json(t: &FuncTable) -> Value {
    let entries: String = t.entries().iter().map(|e| e.token()).collect();
    json!({"arity": t.arity(), "entries": entries})
}

fn valuation_json(v: &Valuation) -> Value {
    Value::Object(v.iter().map(|(k, x)| (k.to_string(), json!(x.to_string()))).collect())
}

fn witness_json(w: &ViolationWitness) -> Value {
    let tokens = |xs: &[Element]| xs.iter().map(|e| e.token()).collect::<String>();
    json!({
        "column_indices": w.column_indices,
        "columns": w.selected_columns.iter().map(|c| tokens(c)).collect::<Vec<_>>(),
        "image": tokens(&w.image),
    })
}

fn parse_env(env: &str) -> Result<Valuation, CliError> {
    let mut v = Valuation::new();
    for binding in env.split(',').map(str::trim).filter(|b| !b.is_empty()) {
        let (name, value) = binding
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("binding `{binding}` is not `name=value`")))?;
        magari4::formula::check_var_name(name.trim(), 0).map_err(|e| CliError::usage(format!("`{name}`: {e}")))?;
        let x: Element = value
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("`{value}` is not one of 0, r, s, 1")))?;
        v.bind(name.trim(), x);
    }
    Ok(v)
}

pub fn eval(src: &str, env: &str) -> Result<Outcome, CliError> {
    let f = formula(src)?;
    let v = parse_env(env)?;
    let x = f.evaluate(&v).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(Outcome::ok(x.to_string(), json!({"value": x.to_string()})))
}

pub fn table(src: &str, vars: Option<&str>) -> Result<Outcome, CliError> {
    let f = formula(src)?;
    let (vars, t) = match vars {
        Some(list) => {
            let vars: Vec<String> = list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            let t = f.truth_table(&vars).map_err(|e| CliError::usage(e.to_string()))?;
            (vars, t)
        }
        None => f.table().map_err(|e| CliError::usage(e.to_string()))?,
    };
    let mut text = String::new();
    if !vars.is_empty() {
        writeln!(text, "{} | value", vars.join(" ")).unwrap();
        for (args, value) in t.rows() {
            let args: Vec<String> = args.iter().map(ToString::to_string).collect();
            writeln!(text, "{} | {value}", args.join(" ")).unwrap();
        }
    }
    writeln!(text, "{t}").unwrap();
    let mut j = table_json(&t);
    j["vars"] = json!(vars);
    Ok(Outcome::ok(text, j))
}

pub fn equiv(left: &str, right: &str) -> Result<Outcome, CliError> {
    let (f, g) = (formula(left)?, formula(right)?);
    match counter_valuation(&f, &g) {
        None => {
            debug_assert!(equivalent(&f, &g));
            Ok(Outcome::ok("equivalent", json!({"equivalent": true})))
        }
        Some(v) => {
            let a = f.evaluate(&v).expect("valuation covers both formulas");
            let b = g.evaluate(&v).expect("valuation covers both formulas");
            Ok(Outcome::negative(
                format!("not equivalent: at {v} the left side is {a} and the right side is {b}"),
                json!({"equivalent": false, "counter_valuation": valuation_json(&v), "values": [a.to_string(), b.to_string()]}),
            ))
        }
    }
}

fn operation(src: &str) -> Result<(Vec<String>, FuncTable), CliError> {
    Definition::parse(src)?.table()
}

pub fn classify(src: &str) -> Result<Outcome, CliError> {
    let (vars, t) = operation(src)?;
    let kept = classify_table(&t);
    let broken: BTreeSet<usize> = (1..=12).filter(|i| !kept.contains(i)).collect();
    let names = |s: &BTreeSet<usize>| s.iter().map(|i| format!("R{i}")).collect::<Vec<_>>();
    let unary = i_op_index(&t).map(|i| i.to_string());
    let mut text = format!("table: {t}\npreserves: {}\nviolates: {}\n", names(&kept).join(" "), names(&broken).join(" "));
    if let Some(u) = &unary {
        writeln!(text, "unary operation: {u}").unwrap();
    }
    Ok(Outcome::ok(
        text,
        json!({
            "vars": vars,
            "table": table_json(&t),
            "preserves": kept,
            "violates": broken,
            "delta_preserving": preserves_delta_pairing(&t),
            "unary_index": unary,
        }),
    ))
}

pub fn violations(src: &str, relation: Option<&str>) -> Result<Outcome, CliError> {
    let (_, t) = operation(src)?;
    let relations: Vec<(String, RelationMatrix)> = match relation {
        Some(r) => {
            let m: RelationMatrix = r.parse().map_err(|e| CliError::usage(format!("bad relation `{r}`: {e}")))?;
            vec![(r.trim().to_string(), m)]
        }
        None => (1..=12)
            .map(|i| (format!("R{i}"), builtin_relation(i).expect("valid index")))
            .collect(),
    };
    let mut text = String::new();
    let mut results = Vec::new();
    let mut any = false;
    for (name, r) in &relations {
        match find_violation(&t, r) {
            Some(w) => {
                any = true;
                writeln!(text, "{name}: violated by {w}").unwrap();
                results.push(json!({"relation": name, "preserved": false, "witness": witness_json(&w)}));
            }
            None => {
                writeln!(text, "{name}: preserved").unwrap();
                results.push(json!({"relation": name, "preserved": true}));
            }
        }
    }
    let j = json!({"table": table_json(&t), "results": results});
    Ok(if any { Outcome::negative(text, j) } else { Outcome::ok(text, j) })
}

pub fn synthesize(src: &str, simplify: bool) -> Result<Outcome, CliError> {
    let t: FuncTable = src.trim().parse().map_err(|e| CliError::usage(format!("bad table `{src}`: {e}")))?;
    if t.arity() == 0 || t.arity() > MAX_SYNTHESIS_ARITY {
        return Err(CliError::usage(format!(
            "synthesis takes tables of arity 1..={MAX_SYNTHESIS_ARITY}, got {}",
            t.arity()
        )));
    }
    let vars = default_vars(t.arity());
    let opts = SynthesisOptions {
        drop_zero_disjuncts: simplify,
    };
    match synthesize_with(&t, &vars, opts) {
        Ok(f) => {
            let check = f.truth_table(&vars).map_err(|e| CliError::Internal(e.to_string()))?;
            if check != t {
                return Err(CliError::Internal("synthesized formula does not realize the table".into()));
            }
            let text = f.to_string();
            Ok(Outcome::ok(text.clone(), json!({"formula": text, "vars": vars, "table": table_json(&t)})))
        }
        Err(SynthesisError::NotRepresentable(w)) => Ok(Outcome::negative(
            format!("not representable: the table breaks Δx = Δy on {w}"),
            json!({"formula": null, "witness": witness_json(&w)}),
        )),
        Err(e) => Err(CliError::usage(e.to_string())),
    }
}

pub fn closure(text: &str, arity: usize, max_tables: usize) -> Result<Outcome, CliError> {
    let members = parse_system(text)?
        .into_iter()
        .map(|(label, def)| Ok((label, def.table()?.1)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let sigma = SystemSigma::new(members).map_err(|e| CliError::usage(e.to_string()))?;
    let limits = ClosureLimits {
        max_tables,
        ..ClosureLimits::default()
    };
    let frag = closure_fragment_with(&sigma, arity, limits).map_err(|e| match e {
        ClosureError::TooLarge { .. } | ClosureError::TooMuchWork { .. } => {
            CliError::usage(format!("{e} (raise --max-tables or lower --arity)"))
        }
        other => CliError::usage(other.to_string()),
    })?;
    let constants: Vec<String> = frag.constants().iter().map(ToString::to_string).collect();
    Ok(Outcome::ok(
        format!(
            "arity {arity}: {} tables\nconstants: {}\n",
            frag.len(),
            if constants.is_empty() { "none".to_string() } else { constants.join(" ") }
        ),
        json!({"arity": arity, "size": frag.len(), "constants": constants}),
    ))
}

fn twelve_system(text: &str) -> Result<TwelveSystem, CliError> {
    let mut members = Vec::new();
    for (label, def) in parse_system(text)? {
        let index = label
            .strip_prefix('F')
            .and_then(|i| i.parse::<usize>().ok())
            .filter(|i| (1..=12).contains(i))
            .ok_or_else(|| CliError::usage(format!("label `{label}` is not one of F1..F12")))?;
        let member = match def {
            Definition::Formula(f) => Member::from_formula(label, f),
            Definition::Table(t) => Member::from_table(label, t),
        }
        .map_err(|e| CliError::usage(e.to_string()))?;
        members.push((index, member));
    }
    TwelveSystem::new(members).map_err(|e| CliError::usage(e.to_string()))
}

fn derivation_json(c: Element, d: &Derivation, sys: &TwelveSystem, max_size: u64) -> (Value, String) {
    let expanded = d.expand(sys);
    let size = expanded.tree_size();
    let formula = (size <= max_size).then(|| expanded.to_string());
    let definitions: Vec<String> = d.definitions().iter().map(|def| def.to_string()).collect();
    let mut text = format!("== {} ==\ndefinitions:\n", c.formula_name());
    for def in &definitions {
        writeln!(text, "  {def}").unwrap();
    }
    text.push_str("trace:\n");
    for s in d.trace() {
        writeln!(text, "  {}: {}", s.step, s.claim).unwrap();
    }
    match &formula {
        Some(f) => writeln!(text, "formula: {f}").unwrap(),
        None => writeln!(text, "formula: not printed ({size} nodes)").unwrap(),
    }
    let j = json!({
        "constant": c.to_string(),
        "term": d.term().to_string(),
        "definitions": definitions,
        "trace": d.trace().iter().map(|s| json!({"step": s.step, "claim": s.claim})).collect::<Vec<_>>(),
        "table": table_json(d.realized()),
        "formula": formula,
        "formula_size": size,
    });
    (j, text)
}

pub fn derive_constants(text: &str, max_formula_size: u64) -> Result<Outcome, CliError> {
    let sys = twelve_system(text)?;
    let all = match derive_all_constants(&sys) {
        Ok(all) => all,
        Err(e @ EngineError::PreconditionViolated { .. }) => {
            return Ok(Outcome::negative(format!("{e}"), json!({"error": e.to_string()})))
        }
        Err(e @ EngineError::InternalProofCheckFailed { .. }) => return Err(CliError::Internal(e.to_string())),
        Err(e) => return Err(CliError::usage(e.to_string())),
    };
    let mut out = String::new();
    let mut items = Vec::new();
    for (c, d) in &all {
        if d.realized().constant_value() != Some(*c) {
            return Err(CliError::Internal(format!("derivation for {c} does not realize it")));
        }
        let (j, t) = derivation_json(*c, d, &sys, max_formula_size);
        out.push_str(&t);
        items.push(j);
    }
    Ok(Outcome::ok(out, Value::Array(items)))
}

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

fn check(name: &str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        ok,
        detail: detail.into(),
    }
}

fn selftest_checks() -> Vec<Check> {
    let mut checks = Vec::new();

    let m = magari_identity_report();
    checks.push(check(
        "Magari identities",
        m.iter().all(|c| c.holds),
        m.iter().map(|c| format!("{}: {}", c.name, c.holds)).collect::<Vec<_>>().join("; "),
    ));

    let gl = gl4_axiom_report();
    let (printed, rest): (Vec<_>, Vec<_>) = gl.iter().partition(|c| c.name == GL4_AXIOM);
    checks.push(check(
        "GL axioms and reflexive GL4 axiom",
        rest.iter().all(|c| c.holds),
        rest.iter().map(|c| format!("{}: {}", c.name, c.holds)).collect::<Vec<_>>().join("; "),
    ));
    // the printed form is expected to fail, with value σ at p = q = 0
    let at_zero = "##0 & (#(#p -> q) | #(#q -> p))"
        .parse::<Formula>()
        .ok()
        .and_then(|f| f.evaluate(&Valuation::new().with("p", Element::Zero).with("q", Element::Zero)).ok());
    checks.push(check(
        "printed GL4 axiom is not valid",
        printed.first().is_some_and(|c| !c.holds) && at_zero == Some(Element::Sigma),
        format!("{GL4_AXIOM} takes {} at p=0,q=0", at_zero.map_or("?", |x| x.formula_name())),
    ));

    let preserving = delta_preserving_unary_tables();
    let counted = all_unary_tables().filter(preserves_delta_pairing).count();
    checks.push(check(
        "64 unary operations preserve Δx = Δy",
        counted == 64 && preserving.len() == 64,
        format!("{counted} of 256"),
    ));

    let pairs = [(1, 5), (1, 8), (4, 5), (4, 8), (2, 5), (2, 8), (1, 6), (4, 6)];
    let mut fixed_ok = true;
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let t = i_op(UnaryOpIndex::new(i, j).expect("valid"));
        let fixed: BTreeSet<Vec<Element>> =
            Element::ALL.into_iter().filter(|&x| t.get(&[x]) == x).map(|x| vec![x]).collect();
        fixed_ok &= fixed == builtin_relation(k + 3).expect("valid").columns().iter().cloned().collect();
    }
    let t37 = i_op(UnaryOpIndex::new(3, 7).expect("valid"));
    let graph: BTreeSet<Vec<Element>> = Element::ALL.into_iter().map(|x| vec![x, t37.get(&[x])]).collect();
    fixed_ok &= graph == builtin_relation(11).expect("valid").columns().iter().cloned().collect();
    checks.push(check(
        "fixed points of I15..I46 and graph of I37 match R3..R11",
        fixed_ok,
        "8 fixed-point sets and 1 graph",
    ));

    let vars = default_vars(1);
    let round_trip = preserving.iter().all(|t| {
        synthesize_with(t, &vars, SynthesisOptions::default())
            .ok()
            .and_then(|f| f.truth_table(&vars).ok())
            .as_ref()
            == Some(t)
    });
    let rejected = all_unary_tables()
        .filter(|t| !preserves_delta_pairing(t))
        .all(|t| matches!(synthesize_with(&t, &vars, SynthesisOptions::default()), Err(SynthesisError::NotRepresentable(_))));
    checks.push(check(
        "synthesis round trip on unary tables",
        round_trip && rejected,
        format!("64 realized: {round_trip}; 192 rejected: {rejected}"),
    ));

    let sys = TwelveSystem::canned();
    let derived: Result<BTreeMap<Element, Derivation>, EngineError> = derive_all_constants(&sys);
    let detail;
    let ok = match &derived {
        Ok(all) => {
            let realized = all.iter().all(|(c, d)| d.realized().constant_value() == Some(*c));
            let expanded = all.values().all(|d| d.verify_expansion(&sys).unwrap_or(false));
            let closure = magari4::closure::expressible_constants(&sys.sigma())
                .map(|s| s == Element::ALL.into_iter().collect())
                .unwrap_or(false);
            detail = format!(
                "{} constants; realized: {realized}; expansions agree: {expanded}; closure agrees: {closure}",
                all.len()
            );
            all.len() == 4 && realized && expanded && closure
        }
        Err(e) => {
            detail = e.to_string();
            false
        }
    };
    checks.push(check("constants from the canned system", ok, detail));
    checks
}

pub fn selftest() -> Result<Outcome, CliError> {
    let checks = selftest_checks();
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "[{}] {}: {}", if c.ok { "ok" } else { "FAILED" }, c.name, c.detail).unwrap();
    }
    let all_ok = checks.iter().all(|c| c.ok);
    if !all_ok {
        eprint!("{text}");
        return Err(CliError::Internal("selftest failed".into()));
    }
    let j = json!({
        "ok": all_ok,
        "checks": checks.iter().map(|c| json!({"name": c.name, "ok": c.ok, "detail": c.detail})).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(text, j))
}
