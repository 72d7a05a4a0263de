use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{Connective, Element};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table of arity {arity} needs {expected} entries, got {got}")]
    Length {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("malformed table `{0}`: expected `<arity>:<entries>` over 0,r,s,1")]
    Format(String),
    #[error("composition needs {expected} argument table(s), got {got}")]
    ComposeArity { expected: usize, got: usize },
    #[error("argument tables of a composition must share one arity")]
    MixedArity,
    #[error("arity {0} is too large for an explicit table")]
    TooLarge(usize),
}

/// Largest arity accepted for an explicit table (4^12 entries).
pub const MAX_TABLE_ARITY: usize = 12;

/// An n-ary operation on the algebra, given by its 4^n values.
///
/// Entries are row-major over the element order (0, ρ, σ, 1) with the first
/// argument most significant, so the entry index of `(x1, .., xn)` is the
/// base-4 number whose digits are the element codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncTable {
    arity: usize,
    entries: Vec<Element>,
}

impl FuncTable {
    pub fn new(arity: usize, entries: Vec<Element>) -> Result<Self, TableError> {
        if arity > MAX_TABLE_ARITY {
            return Err(TableError::TooLarge(arity));
        }
        let expected = 1usize << (2 * arity);
        if entries.len() != expected {
            return Err(TableError::Length {
                arity,
                expected,
                got: entries.len(),
            });
        }
        Ok(FuncTable { arity, entries })
    }

    /// Tabulates `f` over every argument tuple.
    pub fn from_fn(arity: usize, mut f: impl FnMut(&[Element]) -> Element) -> Self {
        assert!(arity <= MAX_TABLE_ARITY, "arity {arity} too large");
        let len = 1usize << (2 * arity);
        let mut args = vec![Element::Zero; arity];
        let entries = (0..len)
            .map(|i| {
                decode_index(i, &mut args);
                f(&args)
            })
            .collect();
        FuncTable { arity, entries }
    }

    pub fn constant(arity: usize, value: Element) -> Self {
        Self::from_fn(arity, |_| value)
    }

    pub fn projection(arity: usize, k: usize) -> Self {
        assert!(k < arity);
        Self::from_fn(arity, |args| args[k])
    }

    pub fn identity() -> Self {
        Self::unary([Element::Zero, Element::Rho, Element::Sigma, Element::One])
    }

    pub fn unary(values: [Element; 4]) -> Self {
        FuncTable {
            arity: 1,
            entries: values.to_vec(),
        }
    }

    pub fn connective(conn: Connective) -> Self {
        Self::from_fn(conn.arity(), |args| {
            conn.apply(args).expect("arity matches by construction")
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, index: usize) -> Element {
        self.entries[index]
    }

    /// Value at an argument tuple. Panics if the tuple length is not the arity.
    pub fn get(&self, args: &[Element]) -> Element {
        assert_eq!(args.len(), self.arity, "argument count must equal arity");
        self.entries[index_of(args)]
    }

    /// The constant value, if every entry is the same.
    pub fn constant_value(&self) -> Option<Element> {
        let first = self.entries[0];
        self.entries.iter().all(|&e| e == first).then_some(first)
    }

    /// Unary tables as a fixed array; `None` for other arities.
    pub fn as_unary(&self) -> Option<[Element; 4]> {
        (self.arity == 1).then(|| [self.entries[0], self.entries[1], self.entries[2], self.entries[3]])
    }

    /// `self(args[0](x), .., args[n-1](x))` as a table over the common
    /// arity of the argument tables.
    pub fn compose(&self, args: &[&FuncTable]) -> Result<FuncTable, TableError> {
        if args.len() != self.arity {
            return Err(TableError::ComposeArity {
                expected: self.arity,
                got: args.len(),
            });
        }
        let k = match args.first() {
            Some(t) => t.arity,
            None => return Ok(self.clone()),
        };
        if args.iter().any(|t| t.arity != k) {
            return Err(TableError::MixedArity);
        }
        let len = 1usize << (2 * k);
        let entries = (0..len)
            .map(|x| {
                let idx = args
                    .iter()
                    .fold(0usize, |acc, t| (acc << 2) | t.entries[x].code() as usize);
                self.entries[idx]
            })
            .collect();
        Ok(FuncTable { arity: k, entries })
    }

    /// Identifies all arguments with one variable: `x ↦ f(x, .., x)`.
    pub fn diagonal(&self) -> FuncTable {
        FuncTable::from_fn(1, |x| {
            let args = vec![x[0]; self.arity];
            self.get(&args)
        })
    }

    /// Iterates `(args, value)` over all entries in order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<Element>, Element)> + '_ {
        let arity = self.arity;
        self.entries.iter().enumerate().map(move |(i, &v)| {
            let mut args = vec![Element::Zero; arity];
            decode_index(i, &mut args);
            (args, v)
        })
    }
}

/// Entry index of an argument tuple.
pub fn index_of(args: &[Element]) -> usize {
    args.iter()
        .fold(0usize, |acc, e| (acc << 2) | e.code() as usize)
}

/// Writes the argument tuple of entry `index` into `args`.
pub fn decode_index(index: usize, args: &mut [Element]) {
    let n = args.len();
    for (k, slot) in args.iter_mut().enumerate() {
        *slot = Element::from_code((index >> (2 * (n - 1 - k))) as u8);
    }
}

impl fmt::Display for FuncTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.arity)?;
        for e in &self.entries {
            write!(f, "{}", e.token())?;
        }
        Ok(())
    }
}

impl FromStr for FuncTable {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TableError::Format(s.to_string());
        let (arity, body) = s.trim().split_once(':').ok_or_else(bad)?;
        let arity: usize = arity.trim().parse().map_err(|_| bad())?;
        let entries = body
            .trim()
            .chars()
            .map(|c| Element::from_token(c).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        FuncTable::new(arity, entries)
    }
}

/// True if `s` looks like the table text format rather than a formula.
pub fn looks_like_table(s: &str) -> bool {
    let s = s.trim();
    match s.split_once(':') {
        Some((a, _)) => !a.is_empty() && a.trim().chars().all(|c| c.is_ascii_digit()),
        None => false,
    }
}
