//! Relations given extensionally as matrices of columns, and the test of
//! whether an operation preserves them.
//!
//! An n-ary operation preserves an m-ary relation when applying it row-wise
//! to any n columns of the matrix (repetition allowed) yields a column of the
//! matrix again.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::Element::{self, One, Rho, Sigma, Zero};
use crate::formula::FuncTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreservationError {
    #[error("built-in relations are numbered 1..=12, got {0}")]
    RelationIndex(usize),
    #[error("unary operation indices are 1..=8, got ({0}, {1})")]
    OpIndex(usize, usize),
    #[error("malformed relation matrix `{0}`")]
    Format(String),
    #[error("a relation matrix needs at least one row and one column")]
    Empty,
    #[error("all rows of a relation matrix must have the same length")]
    Ragged,
}

/// An m-ary relation stored as the list of its m-tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    arity: usize,
    columns: Vec<Vec<Element>>,
    lookup: HashSet<Vec<Element>>,
    name: Option<String>,
}

impl RelationMatrix {
    /// Builds a matrix from its columns. Duplicates are dropped, keeping the
    /// first occurrence; column order is otherwise preserved.
    pub fn new(columns: Vec<Vec<Element>>) -> Result<Self, PreservationError> {
        let arity = columns.first().map(Vec::len).ok_or(PreservationError::Empty)?;
        if arity == 0 {
            return Err(PreservationError::Empty);
        }
        if columns.iter().any(|c| c.len() != arity) {
            return Err(PreservationError::Ragged);
        }
        let mut lookup = HashSet::new();
        let columns: Vec<_> = columns.into_iter().filter(|c| lookup.insert(c.clone())).collect();
        Ok(RelationMatrix {
            arity,
            columns,
            lookup,
            name: None,
        })
    }

    /// A unary relation, i.e. a subset of the carrier.
    pub fn unary(elements: &[Element]) -> Result<Self, PreservationError> {
        Self::new(elements.iter().map(|&e| vec![e]).collect())
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn columns(&self) -> &[Vec<Element>] {
        &self.columns
    }

    pub fn contains(&self, tuple: &[Element]) -> bool {
        self.lookup.contains(tuple)
    }
}

impl fmt::Display for RelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.arity {
            if r > 0 {
                f.write_str(";")?;
            }
            for c in &self.columns {
                write!(f, "{}", c[r])?;
            }
        }
        Ok(())
    }
}

impl FromStr for RelationMatrix {
    type Err = PreservationError;

    /// Accepts `R1`..`R12` or rows separated by `;`, e.g. `0rs1;r01s`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(idx) = s.strip_prefix('R') {
            let i = idx.parse().map_err(|_| PreservationError::Format(s.to_string()))?;
            return builtin_relation(i);
        }
        let rows = s
            .split(';')
            .map(|row| {
                row.trim()
                    .chars()
                    .map(|c| Element::from_token(c).ok_or_else(|| PreservationError::Format(s.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let width = rows[0].len();
        if width == 0 {
            return Err(PreservationError::Empty);
        }
        if rows.iter().any(|r| r.len() != width) {
            return Err(PreservationError::Ragged);
        }
        let columns = (0..width).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
        RelationMatrix::new(columns)
    }
}

/// A choice of columns whose row-wise image leaves the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationWitness {
    /// Indices into the matrix columns, one per argument of the operation.
    pub column_indices: Vec<usize>,
    pub selected_columns: Vec<Vec<Element>>,
    pub image: Vec<Element>,
}

impl ViolationWitness {
    /// Argument tuple fed to the operation in row `row`.
    pub fn row_arguments(&self, row: usize) -> Vec<Element> {
        self.selected_columns.iter().map(|c| c[row]).collect()
    }
}

impl fmt::Display for ViolationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .selected_columns
            .iter()
            .map(|c| c.iter().map(|e| e.token()).collect())
            .collect();
        let image: String = self.image.iter().map(|e| e.token()).collect();
        write!(f, "columns ({}) -> {}", cols.join(","), image)
    }
}

fn image_of(f: &FuncTable, r: &RelationMatrix, picks: &[usize], args: &mut [Element]) -> Vec<Element> {
    (0..r.arity)
        .map(|row| {
            for (slot, &c) in args.iter_mut().zip(picks) {
                *slot = r.columns[c][row];
            }
            f.get(args)
        })
        .collect()
}

/// First violation in lexicographic order of column-index sequences
/// (first argument most significant).
pub fn find_violation(f: &FuncTable, r: &RelationMatrix) -> Option<ViolationWitness> {
    let n = f.arity();
    let l = r.columns.len();
    let mut picks = vec![0usize; n];
    let mut args = vec![Zero; n];
    loop {
        let image = image_of(f, r, &picks, &mut args);
        if !r.contains(&image) {
            return Some(ViolationWitness {
                selected_columns: picks.iter().map(|&c| r.columns[c].clone()).collect(),
                column_indices: picks,
                image,
            });
        }
        // odometer, last position fastest
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            picks[k] += 1;
            if picks[k] < l {
                break;
            }
            picks[k] = 0;
        }
    }
}

pub fn preserves(f: &FuncTable, r: &RelationMatrix) -> bool {
    find_violation(f, r).is_none()
}

/// Column pairs of the unary-operation table, columns 1..=8.
pub const OP_COLUMNS: [(Element, Element); 8] = [
    (Zero, Zero),
    (Zero, Rho),
    (Rho, Zero),
    (Rho, Rho),
    (Sigma, Sigma),
    (Sigma, One),
    (One, Sigma),
    (One, One),
];

/// Index of a Δ-class-preserving unary operation: values on {0, ρ} come from
/// column `i`, values on {σ, 1} from column `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnaryOpIndex {
    i: u8,
    j: u8,
}

impl UnaryOpIndex {
    pub fn new(i: usize, j: usize) -> Result<Self, PreservationError> {
        if (1..=8).contains(&i) && (1..=8).contains(&j) {
            Ok(UnaryOpIndex { i: i as u8, j: j as u8 })
        } else {
            Err(PreservationError::OpIndex(i, j))
        }
    }

    pub fn i(self) -> usize {
        self.i as usize
    }

    pub fn j(self) -> usize {
        self.j as usize
    }

    pub fn all() -> impl Iterator<Item = UnaryOpIndex> {
        (1..=8u8).flat_map(|i| (1..=8u8).map(move |j| UnaryOpIndex { i, j }))
    }
}

impl fmt::Display for UnaryOpIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}{}", self.i, self.j)
    }
}

pub fn i_op(idx: UnaryOpIndex) -> FuncTable {
    let (a, b) = OP_COLUMNS[idx.i() - 1];
    let (c, d) = OP_COLUMNS[idx.j() - 1];
    FuncTable::unary([a, b, c, d])
}

/// The Table-1 index of a unary table, if it preserves the Δ-classes.
pub fn i_op_index(f: &FuncTable) -> Option<UnaryOpIndex> {
    UnaryOpIndex::all().find(|&idx| &i_op(idx) == f)
}

fn pairs(ps: &[(Element, Element)]) -> Vec<Vec<Element>> {
    ps.iter().map(|&(a, b)| vec![a, b]).collect()
}

/// The matrices of the twelve relations, in their published column order.
pub fn builtin_relation(i: usize) -> Result<RelationMatrix, PreservationError> {
    let m = match i {
        1 => RelationMatrix::unary(&[Zero, Rho]),
        2 => RelationMatrix::unary(&[Sigma, One]),
        3 => RelationMatrix::unary(&[Zero, Sigma]),
        4 => RelationMatrix::unary(&[Zero, One]),
        5 => RelationMatrix::unary(&[Rho, Sigma]),
        6 => RelationMatrix::unary(&[Rho, One]),
        7 => RelationMatrix::unary(&[Zero, Rho, Sigma]),
        8 => RelationMatrix::unary(&[Zero, Rho, One]),
        9 => RelationMatrix::unary(&[Zero, Sigma, One]),
        10 => RelationMatrix::unary(&[Rho, Sigma, One]),
        11 => RelationMatrix::new(pairs(&[(Zero, Rho), (Rho, Zero), (Sigma, One), (One, Sigma)])),
        12 => RelationMatrix::new(pairs(&[
            (Zero, Sigma),
            (Zero, One),
            (Rho, Sigma),
            (Rho, One),
            (Sigma, Zero),
            (Sigma, Rho),
            (One, Zero),
            (One, Rho),
        ])),
        _ => return Err(PreservationError::RelationIndex(i)),
    }?;
    Ok(m.named(format!("R{i}")))
}

/// The binary relation Δx = Δy.
pub fn delta_pairing_relation() -> RelationMatrix {
    let cols = Element::ALL
        .iter()
        .flat_map(|&x| Element::ALL.iter().map(move |&y| (x, y)))
        .filter(|(x, y)| x.delta() == y.delta())
        .map(|(x, y)| vec![x, y])
        .collect();
    RelationMatrix::new(cols).expect("non-empty").named("D")
}

/// Whether the Δ-class of every output depends only on the Δ-classes of
/// the inputs; equivalent to preserving [`delta_pairing_relation`].
pub fn preserves_delta_pairing(f: &FuncTable) -> bool {
    let n = f.arity();
    // class signature of an entry index: the high bit of each argument code
    let mut seen: Vec<Option<bool>> = vec![None; 1 << n];
    for (idx, &v) in f.entries().iter().enumerate() {
        let sig = (0..n).fold(0usize, |acc, k| (acc << 1) | ((idx >> (2 * (n - 1 - k) + 1)) & 1));
        let class = v.code() & 0b10 != 0;
        match seen[sig] {
            None => seen[sig] = Some(class),
            Some(c) if c != class => return false,
            _ => {}
        }
    }
    true
}

/// Indices i in 1..=12 such that `f` preserves R_i.
pub fn classify(f: &FuncTable) -> BTreeSet<usize> {
    (1..=12)
        .filter(|&i| preserves(f, &builtin_relation(i).expect("valid index")))
        .collect()
}

/// All 256 unary tables in entry order.
pub fn all_unary_tables() -> impl Iterator<Item = FuncTable> {
    (0u32..256).map(|bits| {
        let e = |k: u32| Element::from_code((bits >> (2 * (3 - k))) as u8);
        FuncTable::unary([e(0), e(1), e(2), e(3)])
    })
}

/// The 64 unary tables preserving Δx = Δy, ordered by Table-1 index.
pub fn delta_preserving_unary_tables() -> Vec<FuncTable> {
    UnaryOpIndex::all().map(i_op).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Connective;

    fn delta() -> FuncTable {
        FuncTable::connective(Connective::Delta)
    }

    #[test]
    fn delta_violates_r1() {
        let r1 = builtin_relation(1).unwrap();
        assert!(!preserves(&delta(), &r1));
        let w = find_violation(&delta(), &r1).unwrap();
        assert_eq!(w.selected_columns, vec![vec![Zero]]);
        assert_eq!(w.image, vec![Sigma]);
    }

    #[test]
    fn not_violates_r2() {
        let not = FuncTable::connective(Connective::Not);
        let w = find_violation(&not, &builtin_relation(2).unwrap()).unwrap();
        assert_eq!(w.selected_columns, vec![vec![Sigma]]);
        assert_eq!(w.image, vec![Rho]);
    }

    #[test]
    fn projections_preserve_everything() {
        for n in 1..=3 {
            for k in 0..n {
                let p = FuncTable::projection(n, k);
                for i in 1..=12 {
                    assert!(find_violation(&p, &builtin_relation(i).unwrap()).is_none());
                }
                assert!(preserves(&p, &delta_pairing_relation()));
            }
        }
        assert_eq!(classify(&FuncTable::identity()), (1..=12).collect());
    }

    #[test]
    fn r12_witness_shape() {
        let f: FuncTable = crate::formula::parse("#p & #q").unwrap().table().unwrap().1;
        let r12 = builtin_relation(12).unwrap();
        let w = find_violation(&f, &r12).unwrap();
        // the two rows are the tuples (γ, δ) of the argument-wise pairs
        let gamma = w.row_arguments(0);
        let delta = w.row_arguments(1);
        for (g, d) in gamma.iter().zip(&delta) {
            assert_ne!(g.delta(), d.delta());
        }
        assert_eq!(f.get(&gamma).delta(), f.get(&delta).delta());
    }

    #[test]
    fn builtins_match_published_matrices() {
        assert_eq!(builtin_relation(1).unwrap().to_string(), "0r");
        assert_eq!(builtin_relation(10).unwrap().to_string(), "rs1");
        assert_eq!(builtin_relation(11).unwrap().to_string(), "0rs1;r01s");
        assert_eq!(builtin_relation(12).unwrap().to_string(), "00rrss11;s1s10r0r");
        assert_eq!(builtin_relation(0), Err(PreservationError::RelationIndex(0)));
        assert_eq!(builtin_relation(13), Err(PreservationError::RelationIndex(13)));
        let parsed: RelationMatrix = "0rs1;r01s".parse().unwrap();
        assert_eq!(parsed.columns(), builtin_relation(11).unwrap().columns());
        assert_eq!("R7".parse::<RelationMatrix>().unwrap().name(), Some("R7"));
        assert!("0r;s".parse::<RelationMatrix>().is_err());
        assert!("0x".parse::<RelationMatrix>().is_err());
    }

    #[test]
    fn unary_ops_from_table_one() {
        let t = |i, j| i_op(UnaryOpIndex::new(i, j).unwrap());
        assert_eq!(t(7, 3), FuncTable::connective(Connective::Not));
        assert_eq!(t(5, 8), delta());
        assert_eq!(t(2, 6), FuncTable::identity());
        assert_eq!(t(1, 1), FuncTable::constant(1, Zero));
        assert_eq!(t(8, 8), FuncTable::constant(1, One));
        // the identity is I26, not I16
        assert_eq!(t(1, 6).entries(), &[Zero, Zero, Sigma, One]);
        assert!(UnaryOpIndex::new(0, 3).is_err());
        assert!(UnaryOpIndex::new(3, 9).is_err());
        assert_eq!(i_op_index(&delta()).unwrap().to_string(), "I58");
    }

    #[test]
    fn fixed_points_of_i25_are_r7() {
        let f = i_op(UnaryOpIndex::new(2, 5).unwrap());
        let fixed: Vec<_> = Element::ALL.into_iter().filter(|&x| f.get(&[x]) == x).collect();
        assert_eq!(fixed, vec![Zero, Rho, Sigma]);
    }

    #[test]
    fn delta_pairing() {
        for c in Connective::ALL {
            assert!(preserves_delta_pairing(&FuncTable::connective(c)));
        }
        assert!(!preserves_delta_pairing(&FuncTable::unary([Zero, Sigma, Zero, Zero])));
        let count = all_unary_tables().filter(preserves_delta_pairing).count();
        assert_eq!(count, 64);
        // fast route agrees with the matrix route on every unary table
        let m = delta_pairing_relation();
        for t in all_unary_tables() {
            assert_eq!(preserves_delta_pairing(&t), preserves(&t, &m));
        }
    }

    #[test]
    fn classify_examples() {
        let d = classify(&delta());
        assert!(!d.contains(&1) && d.contains(&2));
        let n = classify(&FuncTable::connective(Connective::Not));
        assert!(!n.contains(&2));
    }
}
