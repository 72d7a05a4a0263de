//! Derivation terms over the members of a system and named intermediate
//! definitions, their realized tables, and their expansion into formulas.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::system::TwelveSystem;
use crate::formula::{Formula, FormulaError, FuncTable};

/// A term built by weak substitution.
#[derive(Debug, Clone)]
pub enum Term {
    Var(Arc<str>),
    /// Member `F_index` of the system applied to argument terms.
    Member { index: usize, args: Vec<Arc<Term>> },
    /// A previously derived definition applied to argument terms.
    Call { def: Arc<Definition>, args: Vec<Arc<Term>> },
}

impl Term {
    pub fn var(name: &str) -> Arc<Term> {
        Arc::new(Term::Var(Arc::from(name)))
    }

    pub fn member(index: usize, args: Vec<Arc<Term>>) -> Arc<Term> {
        Arc::new(Term::Member { index, args })
    }

    pub fn call(def: &Arc<Definition>, args: Vec<Arc<Term>>) -> Arc<Term> {
        assert_eq!(def.params.len(), args.len(), "wrong argument count for {}", def.name);
        Arc::new(Term::Call {
            def: def.clone(),
            args,
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (head, args) = match self {
            Term::Var(v) => return f.write_str(v),
            Term::Member { index, args } => (format!("F{index}"), args),
            Term::Call { def, args } => (def.name.clone(), args),
        };
        write!(f, "{head}(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A named term with parameters, e.g. `D*(p, q) = D(p, p, p, p, q, q, q, q)`.
#[derive(Debug)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: Arc<Term>,
    /// Computed by composing tables; never taken from the caller.
    pub table: FuncTable,
}

impl Definition {
    pub fn new(
        name: impl Into<String>,
        params: &[&str],
        body: Arc<Term>,
        sys: &TwelveSystem,
    ) -> Arc<Definition> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let table = term_table(&body, &params, sys);
        Arc::new(Definition {
            name: name.into(),
            params,
            body,
            table,
        })
    }

    /// Value of a unary definition at `x`.
    pub fn at(&self, x: crate::algebra::Element) -> crate::algebra::Element {
        self.table.get(&[x])
    }

    /// Definitions this one depends on, dependencies first, each once.
    pub fn dependencies(self: &Arc<Self>) -> Vec<Arc<Definition>> {
        fn walk_term(t: &Term, out: &mut Vec<Arc<Definition>>) {
            match t {
                Term::Var(_) => {}
                Term::Member { args, .. } => args.iter().for_each(|a| walk_term(a, out)),
                Term::Call { def, args } => {
                    walk_def(def, out);
                    args.iter().for_each(|a| walk_term(a, out));
                }
            }
        }
        fn walk_def(d: &Arc<Definition>, out: &mut Vec<Arc<Definition>>) {
            if out.iter().any(|e| Arc::ptr_eq(e, d)) {
                return;
            }
            walk_term(&d.body, out);
            out.push(d.clone());
        }
        let mut out = Vec::new();
        walk_def(self, &mut out);
        out
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) = {}", self.name, self.params.join(", "), self.body)
    }
}

/// Table of `term` over `vars`, by composing member and definition tables.
pub fn term_table(term: &Arc<Term>, vars: &[String], sys: &TwelveSystem) -> FuncTable {
    fn go(
        t: &Arc<Term>,
        vars: &[String],
        sys: &TwelveSystem,
        memo: &mut HashMap<*const Term, FuncTable>,
    ) -> FuncTable {
        if let Some(r) = memo.get(&Arc::as_ptr(t)) {
            return r.clone();
        }
        let r = match &**t {
            Term::Var(v) => {
                let k = vars
                    .iter()
                    .position(|x| x.as_str() == &**v)
                    .unwrap_or_else(|| panic!("variable {v} not among parameters"));
                FuncTable::projection(vars.len(), k)
            }
            Term::Member { index, args } => {
                let tables: Vec<FuncTable> = args.iter().map(|a| go(a, vars, sys, memo)).collect();
                let refs: Vec<&FuncTable> = tables.iter().collect();
                sys.member(*index)
                    .unwrap_or_else(|| panic!("F{index} is not in the system"))
                    .table
                    .compose(&refs)
                    .expect("argument count matches member arity")
            }
            Term::Call { def, args } => {
                let tables: Vec<FuncTable> = args.iter().map(|a| go(a, vars, sys, memo)).collect();
                let refs: Vec<&FuncTable> = tables.iter().collect();
                def.table.compose(&refs).expect("argument count matches definition")
            }
        };
        memo.insert(Arc::as_ptr(t), r.clone());
        r
    }
    go(term, vars, sys, &mut HashMap::new())
}

/// The formula obtained by substituting member formulas (and, recursively,
/// definition bodies) for every application in `term`.
pub fn expand(term: &Arc<Term>, sys: &TwelveSystem) -> Formula {
    let mut ex = Expander {
        sys,
        terms: HashMap::new(),
        defs: HashMap::new(),
    };
    (*ex.term(term)).clone()
}

struct Expander<'a> {
    sys: &'a TwelveSystem,
    terms: HashMap<*const Term, Arc<Formula>>,
    defs: HashMap<*const Definition, Arc<Formula>>,
}

impl Expander<'_> {
    fn term(&mut self, t: &Arc<Term>) -> Arc<Formula> {
        if let Some(f) = self.terms.get(&Arc::as_ptr(t)) {
            return f.clone();
        }
        let f = match &**t {
            Term::Var(v) => Arc::new(Formula::var(v)),
            Term::Member { index, args } => {
                let m = self
                    .sys
                    .member(*index)
                    .unwrap_or_else(|| panic!("F{index} is not in the system"));
                let args: Vec<Arc<Formula>> = args.iter().map(|a| self.term(a)).collect();
                let map: HashMap<&str, Arc<Formula>> =
                    m.params.iter().map(String::as_str).zip(args).collect();
                Arc::new(m.formula.substitute_all(&map))
            }
            Term::Call { def, args } => {
                let body = self.def(def);
                let args: Vec<Arc<Formula>> = args.iter().map(|a| self.term(a)).collect();
                let map: HashMap<&str, Arc<Formula>> =
                    def.params.iter().map(String::as_str).zip(args).collect();
                Arc::new(body.substitute_all(&map))
            }
        };
        self.terms.insert(Arc::as_ptr(t), f.clone());
        f
    }

    fn def(&mut self, d: &Arc<Definition>) -> Arc<Formula> {
        if let Some(f) = self.defs.get(&Arc::as_ptr(d)) {
            return f.clone();
        }
        let f = self.term(&d.body);
        self.defs.insert(Arc::as_ptr(d), f.clone());
        f
    }
}

/// A verified claim recorded while building a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: String,
    pub claim: String,
}

/// A definition together with the proof steps that led to it.
#[derive(Debug, Clone)]
pub struct Derivation {
    def: Arc<Definition>,
    trace: Vec<TraceStep>,
}

impl Derivation {
    pub(crate) fn new(def: Arc<Definition>, trace: Vec<TraceStep>) -> Self {
        Derivation { def, trace }
    }

    pub fn definition(&self) -> &Arc<Definition> {
        &self.def
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn vars(&self) -> &[String] {
        &self.def.params
    }

    pub fn term(&self) -> &Arc<Term> {
        &self.def.body
    }

    pub fn realized(&self) -> &FuncTable {
        &self.def.table
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// Every definition used, dependencies first, ending with this one.
    pub fn definitions(&self) -> Vec<Arc<Definition>> {
        self.def.dependencies()
    }

    /// Full expansion into a formula over the member formulas.
    pub fn expand(&self, sys: &TwelveSystem) -> Formula {
        expand(&self.def.body, sys)
    }

    /// Recomputes the table through the expanded formula.
    pub fn verify_expansion(&self, sys: &TwelveSystem) -> Result<bool, FormulaError> {
        let t = self.expand(sys).truth_table(&self.def.params)?;
        Ok(&t == self.realized())
    }
}
