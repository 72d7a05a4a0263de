use std::collections::BTreeMap;
use std::fmt;

use super::EngineError;
use crate::closure::SystemSigma;
use crate::formula::{Formula, FuncTable};
use crate::preservation::{builtin_relation, find_violation, preserves_delta_pairing, ViolationWitness};
use crate::synthesis::{default_vars, synthesize};

/// A formula of the system together with its parameter order and table.
#[derive(Debug, Clone)]
pub struct Member {
    pub label: String,
    pub formula: Formula,
    pub params: Vec<String>,
    pub table: FuncTable,
}

impl Member {
    /// Parameters are the free variables in sorted order.
    pub fn from_formula(label: impl Into<String>, formula: Formula) -> Result<Self, EngineError> {
        let params: Vec<String> = formula.variables().into_iter().collect();
        Self::with_params(label, formula, params)
    }

    pub fn with_params(
        label: impl Into<String>,
        formula: Formula,
        params: Vec<String>,
    ) -> Result<Self, EngineError> {
        let label = label.into();
        if params.is_empty() {
            return Err(EngineError::InvalidMember {
                label,
                reason: "a member needs at least one variable".into(),
            });
        }
        let table = formula
            .truth_table(&params)
            .map_err(|e| EngineError::InvalidMember {
                label: label.clone(),
                reason: e.to_string(),
            })?;
        Ok(Member {
            label,
            formula,
            params,
            table,
        })
    }

    /// A member given only by its table; the formula is synthesized over
    /// `p1..pn`.
    pub fn from_table(label: impl Into<String>, table: FuncTable) -> Result<Self, EngineError> {
        let label = label.into();
        let formula = synthesize(&table).map_err(|e| EngineError::InvalidMember {
            label: label.clone(),
            reason: e.to_string(),
        })?;
        Ok(Member {
            label,
            formula,
            params: default_vars(table.arity()),
            table,
        })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone)]
struct Entry {
    member: Member,
    witness: Option<ViolationWitness>,
}

/// Formulas F1..F12 indexed by the relation each is meant to violate.
#[derive(Debug, Clone, Default)]
pub struct TwelveSystem {
    entries: BTreeMap<usize, Entry>,
}

impl TwelveSystem {
    /// Members may be missing or may preserve their relation; lemmas that
    /// need a violation of R_i report the index when it is absent.
    pub fn new(members: impl IntoIterator<Item = (usize, Member)>) -> Result<Self, EngineError> {
        let mut entries = BTreeMap::new();
        for (i, member) in members {
            let relation = builtin_relation(i).map_err(|_| EngineError::InvalidMember {
                label: member.label.clone(),
                reason: format!("index {i} is not in 1..=12"),
            })?;
            if !preserves_delta_pairing(&member.table) {
                return Err(EngineError::InvalidMember {
                    label: member.label.clone(),
                    reason: "table does not preserve Δx = Δy, so it is not realized by a formula".into(),
                });
            }
            let witness = find_violation(&member.table, &relation);
            if entries.insert(i, Entry { member, witness }).is_some() {
                return Err(EngineError::InvalidMember {
                    label: format!("F{i}"),
                    reason: "given twice".into(),
                });
            }
        }
        Ok(TwelveSystem { entries })
    }

    /// Replaces the default witness for F_i after checking it is genuine.
    pub fn with_witness(mut self, i: usize, witness: ViolationWitness) -> Result<Self, EngineError> {
        let bad = |reason: &str| EngineError::InvalidWitness {
            index: i,
            reason: reason.to_string(),
        };
        let relation = builtin_relation(i).map_err(|_| bad("index out of range"))?;
        let entry = self.entries.get_mut(&i).ok_or_else(|| bad("no member F_i"))?;
        let f = &entry.member.table;
        if witness.selected_columns.len() != f.arity() || witness.column_indices.len() != f.arity() {
            return Err(bad("one column per argument is required"));
        }
        for (&c, col) in witness.column_indices.iter().zip(&witness.selected_columns) {
            if relation.columns().get(c) != Some(col) {
                return Err(bad("selected column does not match the relation"));
            }
        }
        let image: Vec<_> = (0..relation.arity()).map(|r| f.get(&witness.row_arguments(r))).collect();
        if image != witness.image {
            return Err(bad("image does not match the member's table"));
        }
        if relation.contains(&image) {
            return Err(bad("image lies inside the relation"));
        }
        entry.witness = Some(witness);
        Ok(self)
    }

    /// A fixed system built from the connectives alone, F_i violating R_i.
    pub fn canned() -> Self {
        const SOURCES: [&str; 12] = [
            "#p", "~p", "~p", "#p", "p & q", "~p", "p | q", "#p", "p -> q", "p & q", "#p", "#p & #q",
        ];
        let members = SOURCES.iter().enumerate().map(|(k, src)| {
            let f: Formula = src.parse().expect("canned formula parses");
            (k + 1, Member::from_formula(format!("F{}", k + 1), f).expect("canned member"))
        });
        let sys = Self::new(members).expect("canned system is valid");
        debug_assert_eq!(sys.first_gap(), None);
        sys
    }

    pub fn member(&self, i: usize) -> Option<&Member> {
        self.entries.get(&i).map(|e| &e.member)
    }

    pub fn witness(&self, i: usize) -> Option<&ViolationWitness> {
        self.entries.get(&i).and_then(|e| e.witness.as_ref())
    }

    /// The member F_i and its witness against R_i.
    pub fn violation(&self, i: usize) -> Result<(&Member, &ViolationWitness), EngineError> {
        match self.entries.get(&i) {
            Some(Entry {
                member,
                witness: Some(w),
            }) => Ok((member, w)),
            Some(_) => Err(EngineError::PreconditionViolated {
                index: Some(i),
                reason: format!("F{i} preserves R{i}"),
            }),
            None => Err(EngineError::PreconditionViolated {
                index: Some(i),
                reason: format!("F{i} is missing"),
            }),
        }
    }

    /// The first index whose member is missing or preserves its relation.
    pub fn first_gap(&self) -> Option<usize> {
        (1..=12).find(|&i| self.witness(i).is_none())
    }

    /// The members as a plain system for the closure oracle.
    pub fn sigma(&self) -> SystemSigma {
        SystemSigma::new(
            self.entries
                .iter()
                .map(|(i, e)| (format!("F{i}"), e.member.table.clone()))
                .collect(),
        )
        .expect("labels F1..F12 are unique and arities positive")
    }
}

impl fmt::Display for TwelveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in &self.entries {
            writeln!(f, "F{i}: {}", e.member.formula)?;
        }
        Ok(())
    }
}
