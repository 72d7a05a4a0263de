//! Bit-parallel tabulation: a table is a vector of u64 words holding 32
//! two-bit lanes each, so every connective is a handful of word operations.

use std::collections::HashMap;
use std::sync::Arc;

use super::{BinaryOp, Formula, FormulaError, FuncTable, UnaryOp};
use crate::algebra::Element;

const LO: u64 = 0x5555_5555_5555_5555;
const HI: u64 = 0xAAAA_AAAA_AAAA_AAAA;

type Words = Vec<u64>;

struct Ctx<'a> {
    vars: &'a [String],
    words: usize,
    projections: HashMap<&'a str, Words>,
    memo: HashMap<*const Formula, Words>,
}

impl<'a> Ctx<'a> {
    fn new(vars: &'a [String]) -> Self {
        let entries = 1usize << (2 * vars.len());
        Ctx {
            vars,
            words: entries.div_ceil(32),
            projections: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    fn projection(&mut self, name: &str) -> Result<Words, FormulaError> {
        if let Some(w) = self.projections.get(name) {
            return Ok(w.clone());
        }
        let (k, key) = self
            .vars
            .iter()
            .enumerate()
            .find(|(_, v)| v.as_str() == name)
            .map(|(k, v)| (k, v.as_str()))
            .ok_or_else(|| FormulaError::MissingVariable(name.to_string()))?;
        let n = self.vars.len();
        let shift = 2 * (n - 1 - k);
        let entries = 1usize << (2 * n);
        let mut w = vec![0u64; self.words];
        for i in 0..entries {
            let code = ((i >> shift) & 3) as u64;
            w[i / 32] |= code << (2 * (i % 32));
        }
        self.projections.insert(key, w.clone());
        Ok(w)
    }

    fn node(&mut self, f: &Formula) -> Result<Words, FormulaError> {
        Ok(match f {
            Formula::Var(v) => self.projection(v)?,
            Formula::Const(c) => {
                let lane = c.code() as u64;
                vec![lane * LO; self.words]
            }
            Formula::Unary(op, a) => {
                let mut w = self.child(a)?;
                match op {
                    UnaryOp::Not => w.iter_mut().for_each(|x| *x = !*x),
                    UnaryOp::Delta => w.iter_mut().for_each(|x| *x = HI | ((*x >> 1) & LO)),
                }
                w
            }
            Formula::Binary(op, a, b) => {
                let mut w = self.child(a)?;
                let r = self.child(b)?;
                let combine: fn(u64, u64) -> u64 = match op {
                    BinaryOp::And => |x, y| x & y,
                    BinaryOp::Or => |x, y| x | y,
                    BinaryOp::Imp => |x, y| !x | y,
                };
                w.iter_mut().zip(&r).for_each(|(x, &y)| *x = combine(*x, y));
                w
            }
        })
    }

    fn child(&mut self, a: &Arc<Formula>) -> Result<Words, FormulaError> {
        // A node reachable through a single Arc can only be visited once.
        if Arc::strong_count(a) == 1 {
            return self.node(a);
        }
        let key = Arc::as_ptr(a);
        if let Some(w) = self.memo.get(&key) {
            return Ok(w.clone());
        }
        let w = self.node(a)?;
        self.memo.insert(key, w.clone());
        Ok(w)
    }
}

pub(super) fn tabulate(f: &Formula, vars: &[String]) -> Result<FuncTable, FormulaError> {
    let mut ctx = Ctx::new(vars);
    let words = ctx.node(f)?;
    let entries = 1usize << (2 * vars.len());
    let values = (0..entries)
        .map(|i| Element::from_code((words[i / 32] >> (2 * (i % 32))) as u8))
        .collect();
    Ok(FuncTable::new(vars.len(), values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element::*;

    #[test]
    fn packed_delta_matches_table() {
        for x in Element::ALL {
            let lane = x.code() as u64;
            let d = HI | (((lane * LO) >> 1) & LO);
            assert_eq!(Element::from_code(d as u8), x.delta());
        }
        assert_eq!(Zero.delta(), Sigma);
    }

    #[test]
    fn wide_tables_span_words() {
        let vars: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let f = super::super::parse("#a & (b | ~c) -> d").unwrap();
        let t = tabulate(&f, &vars).unwrap();
        let oracle = FuncTable::from_fn(4, |x| x[0].delta().and(x[1].or(x[2].not())).implies(x[3]));
        assert_eq!(t, oracle);
    }
}
