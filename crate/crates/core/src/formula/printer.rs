//! Canonical printing with the fewest parentheses that re-parse to the same
//! tree.

use std::fmt;

use super::{BinaryOp, Formula, UnaryOp};

const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const ATOM: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Binary(BinaryOp::Imp, ..) => IMP,
        Formula::Binary(BinaryOp::Or, ..) => OR,
        Formula::Binary(BinaryOp::And, ..) => AND,
        _ => ATOM,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let wrap = prec(f) < min;
    if wrap {
        out.write_str("(")?;
    }
    match f {
        Formula::Var(v) => out.write_str(v)?,
        Formula::Const(c) => out.write_str(c.formula_name())?,
        Formula::Unary(op, a) => {
            out.write_str(match op {
                UnaryOp::Not => "~",
                UnaryOp::Delta => "#",
            })?;
            write_at(a, ATOM, out)?;
        }
        Formula::Binary(op, a, b) => {
            let (l, r, sym) = match op {
                BinaryOp::Imp => (OR, IMP, " -> "),
                BinaryOp::Or => (OR, AND, " | "),
                BinaryOp::And => (AND, ATOM, " & "),
            };
            write_at(a, l, out)?;
            out.write_str(sym)?;
            write_at(b, r, out)?;
        }
    }
    if wrap {
        out.write_str(")")?;
    }
    Ok(())
}

pub(super) fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_at(f, IMP, out)
}
