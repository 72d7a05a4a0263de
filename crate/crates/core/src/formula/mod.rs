//! Formulas over the connectives &, ∨, ⊃, ¬, Δ and their semantics in the
//! four-element algebra.
//!
//! Children are reference counted so substitution can share subterms. Large
//! derivations expand into DAGs whose tree size is astronomically larger than
//! their node count; evaluation to tables caches shared nodes accordingly.

mod packed;
mod parser;
mod printer;
pub mod table;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Connective, Element};

pub use parser::{check_var_name, is_valid_var_name, parse, ParseError};
pub use table::{FuncTable, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("variable `{0}` is missing from the variable order")]
    MissingVariable(String),
    #[error("variable `{0}` appears twice in the variable order")]
    DuplicateVariable(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    And,
    Or,
    Imp,
}

impl UnaryOp {
    pub fn connective(self) -> Connective {
        match self {
            UnaryOp::Not => Connective::Not,
            UnaryOp::Delta => Connective::Delta,
        }
    }

    pub fn eval(self, x: Element) -> Element {
        match self {
            UnaryOp::Not => x.not(),
            UnaryOp::Delta => x.delta(),
        }
    }
}

impl BinaryOp {
    pub fn connective(self) -> Connective {
        match self {
            BinaryOp::And => Connective::And,
            BinaryOp::Or => Connective::Or,
            BinaryOp::Imp => Connective::Imp,
        }
    }

    pub fn eval(self, x: Element, y: Element) -> Element {
        match self {
            BinaryOp::And => x.and(y),
            BinaryOp::Or => x.or(y),
            BinaryOp::Imp => x.implies(y),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Formula {
    Var(Arc<str>),
    Const(Element),
    Unary(UnaryOp, Arc<Formula>),
    Binary(BinaryOp, Arc<Formula>, Arc<Formula>),
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Formula::Var(a), Formula::Var(b)) => a == b,
            (Formula::Const(a), Formula::Const(b)) => a == b,
            (Formula::Unary(o1, a), Formula::Unary(o2, b)) => {
                o1 == o2 && (Arc::ptr_eq(a, b) || a == b)
            }
            (Formula::Binary(o1, a1, b1), Formula::Binary(o2, a2, b2)) => {
                o1 == o2
                    && (Arc::ptr_eq(a1, a2) || a1 == a2)
                    && (Arc::ptr_eq(b1, b2) || b1 == b2)
            }
            _ => false,
        }
    }
}

impl Eq for Formula {}

/// An assignment of elements to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<String, Element>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, value: Element) -> &mut Self {
        self.0.insert(var.into(), value);
        self
    }

    pub fn with(mut self, var: impl Into<String>, value: Element) -> Self {
        self.bind(var, value);
        self
    }

    pub fn get(&self, var: &str) -> Option<Element> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Element)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// All 4^k valuations of `vars`, in table entry order.
    pub fn all(vars: &[String]) -> impl Iterator<Item = Valuation> + '_ {
        let mut args = vec![Element::Zero; vars.len()];
        (0..1usize << (2 * vars.len())).map(move |i| {
            table::decode_index(i, &mut args);
            Valuation(vars.iter().cloned().zip(args.iter().copied()).collect())
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromIterator<(String, Element)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (String, Element)>>(iter: T) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn constant(value: Element) -> Formula {
        Formula::Const(value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Unary(UnaryOp::Not, Arc::new(self))
    }

    pub fn delta(self) -> Formula {
        Formula::Unary(UnaryOp::Delta, Arc::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::Binary(BinaryOp::And, Arc::new(self), Arc::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Binary(BinaryOp::Or, Arc::new(self), Arc::new(other))
    }

    pub fn imp(self, other: Formula) -> Formula {
        Formula::Binary(BinaryOp::Imp, Arc::new(self), Arc::new(other))
    }

    /// `□A`, i.e. `A & #A` with the operand shared.
    pub fn boxed(self) -> Formula {
        let a = Arc::new(self);
        Formula::Binary(
            BinaryOp::And,
            a.clone(),
            Arc::new(Formula::Unary(UnaryOp::Delta, a)),
        )
    }

    /// `A ∼ B`, i.e. `(A -> B) & (B -> A)` with both operands shared.
    pub fn equiv(self, other: Formula) -> Formula {
        let a = Arc::new(self);
        let b = Arc::new(other);
        Formula::Binary(
            BinaryOp::And,
            Arc::new(Formula::Binary(BinaryOp::Imp, a.clone(), b.clone())),
            Arc::new(Formula::Binary(BinaryOp::Imp, b, a)),
        )
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty iterator.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Free variables in sorted order.
    pub fn variables(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, seen: &mut HashSet<*const Formula>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var(v) => {
                    out.insert(v.to_string());
                }
                Formula::Const(_) => {}
                Formula::Unary(_, a) => visit(a, seen, out),
                Formula::Binary(_, a, b) => {
                    visit(a, seen, out);
                    visit(b, seen, out);
                }
            }
        }
        fn visit(a: &Arc<Formula>, seen: &mut HashSet<*const Formula>, out: &mut BTreeSet<String>) {
            if Arc::strong_count(a) == 1 || seen.insert(Arc::as_ptr(a)) {
                walk(a, seen, out);
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut HashSet::new(), &mut out);
        out
    }

    /// Number of nodes of the fully unshared tree, saturating at `u64::MAX`.
    pub fn tree_size(&self) -> u64 {
        fn walk(f: &Formula, memo: &mut HashMap<*const Formula, u64>) -> u64 {
            match f {
                Formula::Var(_) | Formula::Const(_) => 1,
                Formula::Unary(_, a) => visit(a, memo).saturating_add(1),
                Formula::Binary(_, a, b) => visit(a, memo)
                    .saturating_add(visit(b, memo))
                    .saturating_add(1),
            }
        }
        fn visit(a: &Arc<Formula>, memo: &mut HashMap<*const Formula, u64>) -> u64 {
            if Arc::strong_count(a) == 1 {
                return walk(a, memo);
            }
            if let Some(&n) = memo.get(&Arc::as_ptr(a)) {
                return n;
            }
            let n = walk(a, memo);
            memo.insert(Arc::as_ptr(a), n);
            n
        }
        walk(self, &mut HashMap::new())
    }

    /// Evaluates under `v` by structural recursion.
    pub fn evaluate(&self, v: &Valuation) -> Result<Element, FormulaError> {
        Ok(match self {
            Formula::Var(name) => v
                .get(name)
                .ok_or_else(|| FormulaError::Unbound(name.to_string()))?,
            Formula::Const(c) => *c,
            Formula::Unary(op, a) => op.eval(a.evaluate(v)?),
            Formula::Binary(op, a, b) => op.eval(a.evaluate(v)?, b.evaluate(v)?),
        })
    }

    /// The operation realized by the formula, with arguments in `var_order`.
    pub fn truth_table(&self, var_order: &[String]) -> Result<FuncTable, FormulaError> {
        let mut seen = HashSet::new();
        for v in var_order {
            if !seen.insert(v.as_str()) {
                return Err(FormulaError::DuplicateVariable(v.clone()));
            }
        }
        if var_order.len() > table::MAX_TABLE_ARITY {
            return Err(TableError::TooLarge(var_order.len()).into());
        }
        packed::tabulate(self, var_order)
    }

    /// Truth table over the sorted free variables.
    pub fn table(&self) -> Result<(Vec<String>, FuncTable), FormulaError> {
        let vars: Vec<String> = self.variables().into_iter().collect();
        let t = self.truth_table(&vars)?;
        Ok((vars, t))
    }

    /// Replaces every occurrence of `var` by `by`.
    pub fn substitute(&self, var: &str, by: &Formula) -> Formula {
        let mut map = HashMap::new();
        map.insert(var, Arc::new(by.clone()));
        self.substitute_all(&map)
    }

    /// Simultaneous substitution. Shared subterms stay shared in the result.
    pub fn substitute_all(&self, map: &HashMap<&str, Arc<Formula>>) -> Formula {
        let mut memo = HashMap::new();
        match subst_node(self, map, &mut memo) {
            Some(f) => f,
            None => self.clone(),
        }
    }
}

type SubstMemo = HashMap<*const Formula, Option<Arc<Formula>>>;

// `None` means the node is unchanged, so callers can keep the original Arc.
fn subst_node(f: &Formula, map: &HashMap<&str, Arc<Formula>>, memo: &mut SubstMemo) -> Option<Formula> {
    match f {
        Formula::Var(v) => map.get(&**v).map(|b| (**b).clone()),
        Formula::Const(_) => None,
        Formula::Unary(op, a) => subst_child(a, map, memo).map(|a| Formula::Unary(*op, a)),
        Formula::Binary(op, a, b) => {
            let na = subst_child(a, map, memo);
            let nb = subst_child(b, map, memo);
            if na.is_none() && nb.is_none() {
                None
            } else {
                Some(Formula::Binary(
                    *op,
                    na.unwrap_or_else(|| a.clone()),
                    nb.unwrap_or_else(|| b.clone()),
                ))
            }
        }
    }
}

fn subst_child(a: &Arc<Formula>, map: &HashMap<&str, Arc<Formula>>, memo: &mut SubstMemo) -> Option<Arc<Formula>> {
    if let Formula::Var(v) = &**a {
        return map.get(&**v).cloned();
    }
    let shared = Arc::strong_count(a) > 1;
    if shared {
        if let Some(r) = memo.get(&Arc::as_ptr(a)) {
            return r.clone();
        }
    }
    let r = subst_node(a, map, memo).map(Arc::new);
    if shared {
        memo.insert(Arc::as_ptr(a), r.clone());
    }
    r
}

/// Semantic equivalence: identical values under every valuation of the
/// union of the free variables.
pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    counter_valuation(f, g).is_none()
}

/// First valuation (in table order over the sorted union of free variables)
/// on which `f` and `g` differ.
pub fn counter_valuation(f: &Formula, g: &Formula) -> Option<Valuation> {
    let vars: Vec<String> = f.variables().union(&g.variables()).cloned().collect();
    let tf = f.truth_table(&vars).expect("all variables are in the order");
    let tg = g.truth_table(&vars).expect("all variables are in the order");
    let idx = (0..tf.len()).find(|&i| tf.at(i) != tg.at(i))?;
    let mut args = vec![Element::Zero; vars.len()];
    table::decode_index(idx, &mut args);
    Some(vars.into_iter().zip(args).collect())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer::write_formula(self, f)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
