//! Brute-force expressibility oracle.
//!
//! The k-ary fragment of what a system Σ expresses is the least set of k-ary
//! tables containing the k projections and closed under composing a member
//! of Σ with tables already in the set. Equivalence over the algebra is table
//! equality, so replacing a formula by an equivalent one adds nothing here.
//! Constants are not seeded: they must be produced by Σ itself.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::algebra::Element;
use crate::formula::FuncTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("fragment arity must be 1..=3, got {0}")]
    Arity(usize),
    #[error("duplicate label `{0}` in system")]
    DuplicateLabel(String),
    #[error("member `{0}` has arity 0; members need at least one argument")]
    NullaryMember(String),
    #[error("closure of arity {k} exceeded {limit} tables; refusing to continue")]
    TooLarge { k: usize, limit: usize },
    #[error("closure of arity {k} exceeded the budget of {limit} compositions")]
    TooMuchWork { k: usize, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSigma {
    members: Vec<(String, FuncTable)>,
}

impl SystemSigma {
    pub fn new(members: Vec<(String, FuncTable)>) -> Result<Self, ClosureError> {
        let mut labels = HashSet::new();
        for (label, t) in &members {
            if !labels.insert(label.as_str()) {
                return Err(ClosureError::DuplicateLabel(label.clone()));
            }
            if t.arity() == 0 {
                return Err(ClosureError::NullaryMember(label.clone()));
            }
        }
        Ok(SystemSigma { members })
    }

    /// Labels members `g1, g2, ..`.
    pub fn from_tables(tables: impl IntoIterator<Item = FuncTable>) -> Result<Self, ClosureError> {
        Self::new(
            tables
                .into_iter()
                .enumerate()
                .map(|(i, t)| (format!("g{}", i + 1), t))
                .collect(),
        )
    }

    pub fn members(&self) -> &[(String, FuncTable)] {
        &self.members
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureLimits {
    pub max_tables: usize,
    pub max_compositions: u64,
}

impl Default for ClosureLimits {
    fn default() -> Self {
        ClosureLimits {
            max_tables: 20_000,
            max_compositions: 200_000_000,
        }
    }
}

/// The k-ary tables reachable from the projections, in discovery order.
#[derive(Debug, Clone)]
pub struct ClosureFragment {
    k: usize,
    tables: Vec<FuncTable>,
    index: HashSet<FuncTable>,
}

impl ClosureFragment {
    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn tables(&self) -> &[FuncTable] {
        &self.tables
    }

    pub fn contains(&self, t: &FuncTable) -> bool {
        self.index.contains(t)
    }

    /// Values c whose constant k-ary table is in the fragment.
    pub fn constants(&self) -> BTreeSet<Element> {
        self.tables.iter().filter_map(FuncTable::constant_value).collect()
    }
}

pub fn closure_fragment(sigma: &SystemSigma, k: usize) -> Result<ClosureFragment, ClosureError> {
    closure_fragment_with(sigma, k, ClosureLimits::default())
}

pub fn closure_fragment_with(
    sigma: &SystemSigma,
    k: usize,
    limits: ClosureLimits,
) -> Result<ClosureFragment, ClosureError> {
    if !(1..=3).contains(&k) {
        return Err(ClosureError::Arity(k));
    }
    let mut tables: Vec<FuncTable> = (0..k).map(|i| FuncTable::projection(k, i)).collect();
    let mut index: HashSet<FuncTable> = tables.iter().cloned().collect();
    let mut work = 0u64;
    // tables[old..] were added in the previous round
    let mut old = 0;
    loop {
        let known = tables.len();
        let mut fresh = Vec::new();
        for (_, g) in &sigma.members {
            let n = g.arity();
            // each tuple with at least one fresh argument, split by the
            // position of its first fresh argument
            for first in 0..n {
                let ranges: Vec<(usize, usize)> = (0..n)
                    .map(|pos| match pos.cmp(&first) {
                        std::cmp::Ordering::Less => (0, old),
                        std::cmp::Ordering::Equal => (old, known),
                        std::cmp::Ordering::Greater => (0, known),
                    })
                    .collect();
                if ranges.iter().any(|&(lo, hi)| lo >= hi) {
                    continue;
                }
                let mut picks: Vec<usize> = ranges.iter().map(|&(lo, _)| lo).collect();
                loop {
                    work += 1;
                    if work > limits.max_compositions {
                        return Err(ClosureError::TooMuchWork {
                            k,
                            limit: limits.max_compositions,
                        });
                    }
                    let args: Vec<&FuncTable> = picks.iter().map(|&i| &tables[i]).collect();
                    let t = g.compose(&args).expect("arities agree by construction");
                    if !index.contains(&t) {
                        index.insert(t.clone());
                        fresh.push(t);
                        if index.len() > limits.max_tables {
                            return Err(ClosureError::TooLarge {
                                k,
                                limit: limits.max_tables,
                            });
                        }
                    }
                    if !advance(&mut picks, &ranges) {
                        break;
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        old = known;
        tables.extend(fresh);
    }
    Ok(ClosureFragment { k, tables, index })
}

fn advance(picks: &mut [usize], ranges: &[(usize, usize)]) -> bool {
    for pos in (0..picks.len()).rev() {
        picks[pos] += 1;
        if picks[pos] < ranges[pos].1 {
            return true;
        }
        picks[pos] = ranges[pos].0;
    }
    false
}

/// Constants expressible from Σ with the help of variables.
pub fn expressible_constants(sigma: &SystemSigma) -> Result<BTreeSet<Element>, ClosureError> {
    Ok(closure_fragment(sigma, 1)?.constants())
}

/// Whether `target` is expressible from Σ.
pub fn contains(sigma: &SystemSigma, target: &FuncTable) -> Result<bool, ClosureError> {
    let k = target.arity();
    if !(1..=3).contains(&k) {
        return Err(ClosureError::Arity(k));
    }
    Ok(closure_fragment(sigma, k)?.contains(target))
}
