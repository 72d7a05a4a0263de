//! The four-element Magari algebra on {0, ρ, σ, 1}.
//!
//! Elements are stored as two-bit codes (0 = `00`, ρ = `01`, σ = `10`,
//! 1 = `11`) so the boolean reduct is plain bitwise arithmetic and
//! `Δx = 10 | (x >> 1)`. The code doubles as the element's position in the
//! fixed enumeration order used by function tables.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("connective {conn} expects {expected} argument(s), got {got}")]
    Arity {
        conn: Connective,
        expected: usize,
        got: usize,
    },
    #[error("unknown element token `{0}` (expected one of 0, r, s, 1, rho, sigma)")]
    BadToken(String),
}

/// An element of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Element {
    Zero = 0b00,
    Rho = 0b01,
    Sigma = 0b10,
    One = 0b11,
}

/// Which block of the partition {0, ρ} / {σ, 1} an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeltaClass {
    Low,
    High,
}

impl Element {
    /// All elements in enumeration order.
    pub const ALL: [Element; 4] = [Element::Zero, Element::Rho, Element::Sigma, Element::One];

    #[inline]
    pub const fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub const fn from_code(code: u8) -> Element {
        match code & 0b11 {
            0b00 => Element::Zero,
            0b01 => Element::Rho,
            0b10 => Element::Sigma,
            _ => Element::One,
        }
    }

    #[inline]
    pub const fn and(self, other: Element) -> Element {
        Element::from_code(self.code() & other.code())
    }

    #[inline]
    pub const fn or(self, other: Element) -> Element {
        Element::from_code(self.code() | other.code())
    }

    #[inline]
    pub const fn not(self) -> Element {
        Element::from_code(!self.code())
    }

    /// Material implication `¬x ∨ y`.
    #[inline]
    pub const fn implies(self, other: Element) -> Element {
        self.not().or(other)
    }

    /// The provability operator: Δ0 = Δρ = σ, Δσ = Δ1 = 1.
    #[inline]
    pub const fn delta(self) -> Element {
        Element::from_code(0b10 | (self.code() >> 1))
    }

    /// `x ∧ Δx`.
    #[inline]
    pub const fn boxed(self) -> Element {
        self.and(self.delta())
    }

    /// `(x ⊃ y) ∧ (y ⊃ x)`.
    #[inline]
    pub const fn equiv(self, other: Element) -> Element {
        self.implies(other).and(other.implies(self))
    }

    #[inline]
    pub const fn delta_class(self) -> DeltaClass {
        if self.code() & 0b10 == 0 {
            DeltaClass::Low
        } else {
            DeltaClass::High
        }
    }

    /// Lattice order of the boolean reduct.
    #[inline]
    pub const fn le(self, other: Element) -> bool {
        self.code() & other.code() == self.code()
    }

    /// Short token used in tables, matrices and CLI output.
    pub const fn token(self) -> char {
        match self {
            Element::Zero => '0',
            Element::Rho => 'r',
            Element::Sigma => 's',
            Element::One => '1',
        }
    }

    /// Spelling inside formulas, where `r` and `s` are variable names.
    pub const fn formula_name(self) -> &'static str {
        match self {
            Element::Zero => "0",
            Element::Rho => "rho",
            Element::Sigma => "sigma",
            Element::One => "1",
        }
    }

    pub fn from_token(c: char) -> Option<Element> {
        match c {
            '0' => Some(Element::Zero),
            'r' => Some(Element::Rho),
            's' => Some(Element::Sigma),
            '1' => Some(Element::One),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

impl FromStr for Element {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rho" => Ok(Element::Rho),
            "sigma" => Ok(Element::Sigma),
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => {
                        Element::from_token(c).ok_or_else(|| AlgebraError::BadToken(s.to_string()))
                    }
                    _ => Err(AlgebraError::BadToken(s.to_string())),
                }
            }
        }
    }
}

/// The primitive connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Imp,
    Not,
    Delta,
}

impl Connective {
    pub const ALL: [Connective; 5] = [
        Connective::And,
        Connective::Or,
        Connective::Imp,
        Connective::Not,
        Connective::Delta,
    ];

    pub const fn arity(self) -> usize {
        match self {
            Connective::And | Connective::Or | Connective::Imp => 2,
            Connective::Not | Connective::Delta => 1,
        }
    }

    pub fn apply(self, args: &[Element]) -> Result<Element, AlgebraError> {
        if args.len() != self.arity() {
            return Err(AlgebraError::Arity {
                conn: self,
                expected: self.arity(),
                got: args.len(),
            });
        }
        Ok(match self {
            Connective::And => args[0].and(args[1]),
            Connective::Or => args[0].or(args[1]),
            Connective::Imp => args[0].implies(args[1]),
            Connective::Not => args[0].not(),
            Connective::Delta => args[0].delta(),
        })
    }

    pub const fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Imp => "->",
            Connective::Not => "~",
            Connective::Delta => "#",
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Result of checking one defining identity of Magari algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub cases: usize,
    /// First failing argument tuple, if any.
    pub counterexample: Option<Vec<Element>>,
}

fn sweep1(name: &'static str, law: impl Fn(Element) -> bool) -> IdentityCheck {
    let counterexample = Element::ALL.into_iter().find(|&x| !law(x)).map(|x| vec![x]);
    IdentityCheck {
        name,
        holds: counterexample.is_none(),
        cases: 4,
        counterexample,
    }
}

fn sweep2(name: &'static str, law: impl Fn(Element, Element) -> bool) -> IdentityCheck {
    let counterexample = Element::ALL
        .into_iter()
        .flat_map(|x| Element::ALL.into_iter().map(move |y| (x, y)))
        .find(|&(x, y)| !law(x, y))
        .map(|(x, y)| vec![x, y]);
    IdentityCheck {
        name,
        holds: counterexample.is_none(),
        cases: 16,
        counterexample,
    }
}

/// Exhaustively evaluates the four Magari identities.
pub fn magari_identity_report() -> Vec<IdentityCheck> {
    use Element::One;
    vec![
        sweep2("D(x -> y) -> (Dx -> Dy) = 1", |x, y| {
            x.implies(y).delta().implies(x.delta().implies(y.delta())) == One
        }),
        sweep1("Dx -> DDx = 1", |x| x.delta().implies(x.delta().delta()) == One),
        sweep1("D(Dx -> x) = Dx", |x| x.delta().implies(x).delta() == x.delta()),
        IdentityCheck {
            name: "D1 = 1",
            holds: One.delta() == One,
            cases: 1,
            counterexample: (One.delta() != One).then(Vec::new),
        },
    ]
}

/// The three GL Δ-axioms and the GL4 axiom, checked for validity (value 1
/// under every valuation).
///
/// The GL4 axiom is reported twice. Written with `Δ(Δp ⊃ q)` it is not valid:
/// at p = q = 0 the disjunction is Δρ = σ. With the reflexive box,
/// `Δ((p & Δp) ⊃ q)`, it holds everywhere.
pub fn gl4_axiom_report() -> Vec<IdentityCheck> {
    use Element::{One, Zero};
    let linear = |strict: bool| {
        move |p: Element, q: Element| {
            let bx = |x: Element| if strict { x.delta() } else { x.and(x.delta()) };
            Zero.delta()
                .delta()
                .and(bx(p).implies(q).delta().or(bx(q).implies(p).delta()))
                == One
        }
    };
    vec![
        sweep2("D(p -> q) -> (Dp -> Dq)", |p, q| {
            p.implies(q).delta().implies(p.delta().implies(q.delta())) == One
        }),
        sweep1("D(Dp -> p) -> Dp", |p| {
            p.delta().implies(p).delta().implies(p.delta()) == One
        }),
        sweep1("Dp -> DDp", |p| p.delta().implies(p.delta().delta()) == One),
        sweep2(GL4_AXIOM, linear(true)),
        sweep2(GL4_AXIOM_REFLEXIVE, linear(false)),
    ]
}

/// The GL4 axiom as usually printed.
pub const GL4_AXIOM: &str = "DD0 & (D(Dp -> q) | D(Dq -> p))";
/// The same axiom with the reflexive box `p & Dp` inside.
pub const GL4_AXIOM_REFLEXIVE: &str = "DD0 & (D((p & Dp) -> q) | D((q & Dq) -> p))";

#[cfg(test)]
mod tests {
    use super::Element::*;
    use super::*;

    // Independent lookup tables, written out by hand.
    fn and_oracle(x: Element, y: Element) -> Element {
        const T: [[Element; 4]; 4] = [
            [Zero, Zero, Zero, Zero],
            [Zero, Rho, Zero, Rho],
            [Zero, Zero, Sigma, Sigma],
            [Zero, Rho, Sigma, One],
        ];
        T[x as usize][y as usize]
    }

    fn delta_oracle(x: Element) -> Element {
        match x {
            Zero | Rho => Sigma,
            Sigma | One => One,
        }
    }

    #[test]
    fn apply_examples() {
        assert_eq!(Connective::Delta.apply(&[Rho]).unwrap(), Sigma);
        for x in Element::ALL {
            assert_eq!(Connective::And.apply(&[One, x]).unwrap(), x);
        }
        assert_eq!(Connective::And.apply(&[Rho, Sigma]).unwrap(), Zero);
        assert_eq!(Connective::Or.apply(&[Rho, Sigma]).unwrap(), One);
        assert_eq!(Connective::Not.apply(&[Sigma]).unwrap(), Rho);
        assert_eq!(Connective::Not.apply(&[Zero]).unwrap(), One);
    }

    #[test]
    fn apply_arity_mismatch() {
        let err = Connective::And.apply(&[One]).unwrap_err();
        assert!(matches!(err, AlgebraError::Arity { expected: 2, got: 1, .. }));
        assert!(Connective::Delta.apply(&[One, One]).is_err());
    }

    #[test]
    fn tables_match_oracle() {
        for x in Element::ALL {
            assert_eq!(x.delta(), delta_oracle(x));
            for y in Element::ALL {
                assert_eq!(x.and(y), and_oracle(x, y));
                assert_eq!(x.implies(y), x.not().or(y));
            }
        }
    }

    #[test]
    fn box_and_equiv() {
        assert_eq!(One.boxed(), One);
        assert_eq!(Zero.boxed(), Zero);
        assert_eq!(Sigma.boxed(), Sigma);
        assert_eq!(Rho.boxed(), Zero);
        for x in Element::ALL {
            assert_eq!(x.equiv(x), One);
        }
        assert_eq!(Zero.equiv(Rho), Sigma);
        assert_eq!(Sigma.equiv(One), Sigma);
    }

    #[test]
    fn delta_classes() {
        assert_eq!(Zero.delta_class(), DeltaClass::Low);
        assert_eq!(Rho.delta_class(), DeltaClass::Low);
        assert_eq!(Sigma.delta_class(), DeltaClass::High);
        assert_eq!(One.delta_class(), DeltaClass::High);
        for x in Element::ALL {
            for y in Element::ALL {
                assert_eq!(x.delta_class() == y.delta_class(), x.delta() == y.delta());
            }
        }
    }

    #[test]
    fn boolean_algebra_axioms() {
        let all = Element::ALL;
        assert_eq!(Rho.and(Sigma), Zero);
        assert_eq!(Rho.or(Sigma), One);
        assert_eq!(Rho.not(), Sigma);
        assert_eq!(Sigma.not(), Rho);
        for x in all {
            assert_eq!(x.not().not(), x);
            assert_eq!(x.and(x.not()), Zero);
            assert_eq!(x.or(x.not()), One);
            for y in all {
                assert_eq!(x.and(y), y.and(x));
                assert_eq!(x.or(y), y.or(x));
                assert_eq!(x.and(x.or(y)), x);
                assert_eq!(x.and(y).not(), x.not().or(y.not()));
                for z in all {
                    assert_eq!(x.and(y.and(z)), x.and(y).and(z));
                    assert_eq!(x.or(y.or(z)), x.or(y).or(z));
                    assert_eq!(x.and(y.or(z)), x.and(y).or(x.and(z)));
                    assert_eq!(x.or(y.and(z)), x.or(y).and(x.or(z)));
                }
            }
        }
    }

    #[test]
    fn delta_is_monotone_and_high() {
        for x in Element::ALL {
            assert!(matches!(x.delta(), Sigma | One));
            for y in Element::ALL {
                if x.le(y) {
                    assert!(x.delta().le(y.delta()));
                }
            }
        }
    }

    #[test]
    fn identities_hold() {
        // Δ(Δ0 ⊃ 0) = Δ(σ ⊃ 0) = Δρ = σ = Δ0
        assert_eq!(Zero.delta().implies(Zero), Rho);
        assert_eq!(Zero.delta().implies(Zero).delta(), Zero.delta());
        let report = magari_identity_report();
        assert_eq!(report.len(), 4);
        assert!(report.iter().all(|c| c.holds), "{report:?}");
        let gl = gl4_axiom_report();
        assert_eq!(gl.len(), 5);
        assert!(gl[..3].iter().all(|c| c.holds), "{gl:?}");
        assert!(!gl[3].holds);
        assert_eq!(gl[3].counterexample, Some(vec![Zero, Zero]));
        assert!(gl[4].holds);
    }

    #[test]
    fn tokens() {
        for x in Element::ALL {
            assert_eq!(x.token().to_string().parse::<Element>().unwrap(), x);
        }
        assert_eq!("rho".parse::<Element>().unwrap(), Rho);
        assert_eq!("sigma".parse::<Element>().unwrap(), Sigma);
        assert!("x".parse::<Element>().is_err());
        assert!("rs".parse::<Element>().is_err());
    }
}
