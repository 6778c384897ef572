//! Tarski formulas over polynomial sign conditions, their ASCII
//! s-expression grammar, and the normal forms the elimination pipeline
//! relies on.
//!
//! Grammar, printed with single spaces exactly as emitted:
//!
//! ```text
//! formula := atom | "(and" formula+ ")" | "(or" formula+ ")"
//!          | "(not" formula ")" | "(exists (" var ")" formula ")"
//!          | "(forall (" var ")" formula ")" | "true" | "false"
//! atom    := "(" rel poly " 0)"
//! rel     := "=" | "/=" | "<" | "<=" | ">=" | ">"
//! poly    := integer | var | "(+" poly+ ")" | "(*" poly+ ")"
//!          | "(-" poly poly? ")" | "(^" poly posint ")"
//! var     := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Every atom compares a polynomial with 0. The parser also accepts the
//! two-element form `(rel poly)`; printing always includes the zero.

mod parse;

pub use parse::{parse_formula, parse_poly, ParseError};
pub(crate) use parse::{Parser, Token, TokenKind};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::poly::{sign_of_rat, PolyError, Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("formula contains a quantifier")]
    ContainsQuantifier,
    #[error("formula is not in positive form")]
    NotPositiveForm,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Relation of an atom p ρ 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Le,
    Ge,
    Gt,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Eq,
        Relation::Ne,
        Relation::Lt,
        Relation::Le,
        Relation::Ge,
        Relation::Gt,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "/=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    pub fn from_token(tok: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| r.token() == tok)
    }

    /// Negation: ¬(p ρ 0) ⟺ p ρ' 0.
    pub fn complement(self) -> Relation {
        match self {
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Lt => Relation::Ge,
            Relation::Ge => Relation::Lt,
            Relation::Le => Relation::Gt,
            Relation::Gt => Relation::Le,
        }
    }

    /// Sign flip: p ρ 0 ⟺ (−p) ρ' 0.
    pub fn mirror(self) -> Relation {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Gt => Relation::Lt,
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            r => r,
        }
    }

    /// Truth of s ρ 0 for a sign s ∈ {−1, 0, +1}.
    pub fn holds_for_sign(self, s: i8) -> bool {
        match self {
            Relation::Eq => s == 0,
            Relation::Ne => s != 0,
            Relation::Lt => s < 0,
            Relation::Le => s <= 0,
            Relation::Ge => s >= 0,
            Relation::Gt => s > 0,
        }
    }
}

/// One sign condition p ρ 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub poly: Polynomial,
    pub rel: Relation,
}

impl Atom {
    pub fn new(poly: Polynomial, rel: Relation) -> Self {
        Atom { poly, rel }
    }

    /// Content removed, deterministic leading coefficient made positive,
    /// relation mirrored when the sign flips.
    pub fn normalized(&self) -> Atom {
        if self.poly.is_zero() {
            return self.clone();
        }
        let content = self.poly.content();
        let mut p = self.poly.div_exact(&content);
        let mut rel = self.rel;
        if crate::poly::sign_of(&p.leading_coefficient()) < 0 {
            p = -&p;
            rel = rel.mirror();
        }
        Atom { poly: p, rel }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(poly: Polynomial, rel: Relation) -> Formula {
        Formula::Atom(Atom::new(poly, rel))
    }

    pub fn constant(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    /// Conjunction with constant-level folding only: true children drop,
    /// one false child collapses the whole thing, singletons unwrap.
    pub fn and_of(children: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for c in children {
            match c {
                Formula::True => {}
                Formula::False => return Formula::False,
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction, dual to [`Formula::and_of`].
    pub fn or_of(children: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for c in children {
            match c {
                Formula::False => {}
                Formula::True => return Formula::True,
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Formula::True | Formula::False)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::And(cs) | Formula::Or(cs) => cs.iter().all(|c| c.is_quantifier_free()),
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Free variables, in name order.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut std::collections::BTreeSet<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => {
                    for v in a.poly.variables() {
                        if !bound.iter().any(|b| b == v) {
                            out.insert(v.to_string());
                        }
                    }
                }
                Formula::And(cs) | Formula::Or(cs) => {
                    for c in cs {
                        walk(c, bound, out);
                    }
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = std::collections::BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_formula(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_formula(self))
    }
}

/// Negation-free equivalent: negations pushed to the atoms via relation
/// complement and De Morgan, every atom normalized. Quantifiers are
/// rejected. No constant folding happens here.
pub fn positive_form(f: &Formula) -> Result<Formula, FormulaError> {
    fn go(f: &Formula, negate: bool) -> Result<Formula, FormulaError> {
        Ok(match f {
            Formula::True => Formula::constant(!negate),
            Formula::False => Formula::constant(negate),
            Formula::Atom(a) => {
                let rel = if negate { a.rel.complement() } else { a.rel };
                Formula::Atom(Atom::new(a.poly.clone(), rel).normalized())
            }
            Formula::And(cs) => {
                let mapped = cs.iter().map(|c| go(c, negate)).collect::<Result<_, _>>()?;
                if negate {
                    Formula::Or(mapped)
                } else {
                    Formula::And(mapped)
                }
            }
            Formula::Or(cs) => {
                let mapped = cs.iter().map(|c| go(c, negate)).collect::<Result<_, _>>()?;
                if negate {
                    Formula::And(mapped)
                } else {
                    Formula::Or(mapped)
                }
            }
            Formula::Not(g) => go(g, !negate)?,
            Formula::Exists(..) | Formula::Forall(..) => {
                return Err(FormulaError::ContainsQuantifier)
            }
        })
    }
    go(f, false)
}

/// Repeated children of one connective, kept first-occurrence only.
fn dedup(children: impl Iterator<Item = Formula>) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for c in children {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Recursive constant folding: constant atoms become true/false,
/// constants propagate through the connectives and quantifiers, and
/// repeated siblings collapse.
pub fn fold_constants(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => {
            if a.poly.is_zero() {
                Formula::constant(a.rel.holds_for_sign(0))
            } else if let Some(c) = a.poly.as_constant() {
                Formula::constant(a.rel.holds_for_sign(crate::poly::sign_of(c)))
            } else {
                f.clone()
            }
        }
        Formula::And(cs) => Formula::and_of(dedup(cs.iter().map(fold_constants))),
        Formula::Or(cs) => Formula::or_of(dedup(cs.iter().map(fold_constants))),
        Formula::Not(g) => match fold_constants(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            h => Formula::Not(Box::new(h)),
        },
        Formula::Exists(v, g) => match fold_constants(g) {
            c @ (Formula::True | Formula::False) => c,
            h => Formula::Exists(v.clone(), Box::new(h)),
        },
        Formula::Forall(v, g) => match fold_constants(g) {
            c @ (Formula::True | Formula::False) => c,
            h => Formula::Forall(v.clone(), Box::new(h)),
        },
    }
}

/// Exact truth value of a quantifier-free formula under a full rational
/// assignment.
pub fn evaluate(f: &Formula, assignment: &BTreeMap<String, Rational>) -> Result<bool, FormulaError> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom(a) => {
            let val = a.poly.eval_full(assignment)?;
            Ok(a.rel.holds_for_sign(sign_of_rat(&val)))
        }
        Formula::And(cs) => {
            // No short-circuit: unassigned variables surface regardless of
            // where they sit in the conjunction.
            let mut acc = true;
            for c in cs {
                acc &= evaluate(c, assignment)?;
            }
            Ok(acc)
        }
        Formula::Or(cs) => {
            let mut acc = false;
            for c in cs {
                acc |= evaluate(c, assignment)?;
            }
            Ok(acc)
        }
        Formula::Not(g) => Ok(!evaluate(g, assignment)?),
        Formula::Exists(..) | Formula::Forall(..) => Err(FormulaError::ContainsQuantifier),
    }
}

/// Distinct atoms of a positive quantifier-free formula in document order
/// (leftmost occurrence wins).
pub fn atoms(f: &Formula) -> Result<Vec<Atom>, FormulaError> {
    fn walk(f: &Formula, out: &mut Vec<Atom>) -> Result<(), FormulaError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
                Ok(())
            }
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    walk(c, out)?;
                }
                Ok(())
            }
            Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => {
                Err(FormulaError::NotPositiveForm)
            }
        }
    }
    let mut out = Vec::new();
    walk(f, &mut out)?;
    Ok(out)
}

/// Canonical s-expression text for a polynomial: terms in descending
/// monomial order, explicit coefficients, powers via `^`.
pub fn print_poly(p: &Polynomial) -> String {
    use num_traits::One;
    if p.is_zero() {
        return "0".to_string();
    }
    let mut rendered = Vec::new();
    for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        let factors: Vec<String> = m
            .iter()
            .map(|(v, e)| {
                if e == 1 {
                    v.to_string()
                } else {
                    format!("(^ {} {})", v, e)
                }
            })
            .collect();
        let term = if factors.is_empty() {
            c.to_string()
        } else {
            let body = if factors.len() == 1 {
                factors[0].clone()
            } else {
                format!("(* {})", factors.join(" "))
            };
            if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("(- {})", body)
            } else {
                let inner: Vec<String> = std::iter::once(c.to_string())
                    .chain(m.iter().map(|(v, e)| {
                        if e == 1 {
                            v.to_string()
                        } else {
                            format!("(^ {} {})", v, e)
                        }
                    }))
                    .collect();
                format!("(* {})", inner.join(" "))
            }
        };
        rendered.push(term);
    }
    if rendered.len() == 1 {
        rendered.pop().unwrap()
    } else {
        format!("(+ {})", rendered.join(" "))
    }
}

/// Grammar text for a formula, single spaces, atoms with explicit zero.
pub fn print_formula(f: &Formula) -> String {
    match f {
        Formula::True => "true".to_string(),
        Formula::False => "false".to_string(),
        Formula::Atom(a) => format!("({} {} 0)", a.rel.token(), print_poly(&a.poly)),
        Formula::And(cs) => {
            let body: Vec<String> = cs.iter().map(print_formula).collect();
            format!("(and {})", body.join(" "))
        }
        Formula::Or(cs) => {
            let body: Vec<String> = cs.iter().map(print_formula).collect();
            format!("(or {})", body.join(" "))
        }
        Formula::Not(g) => format!("(not {})", print_formula(g)),
        Formula::Exists(v, g) => format!("(exists ({}) {})", v, print_formula(g)),
        Formula::Forall(v, g) => format!("(forall ({}) {})", v, print_formula(g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use num_bigint::BigInt;

    fn p(src: &str) -> Polynomial {
        parse_poly(src).unwrap()
    }

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn parse_atom_both_forms() {
        let with_zero = f("(< (+ (* a x x) (* b x) c) 0)");
        let without = f("(< (+ (* a x x) (* b x) c))");
        assert_eq!(with_zero, without);
        match with_zero {
            Formula::Atom(a) => {
                assert_eq!(a.rel, Relation::Lt);
                assert_eq!(a.poly.degree_in("x"), 2);
            }
            other => panic!("expected atom, got {other}"),
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in [
            "(and)",
            "(< x y)",
            "(exists x (< x 0))",
            "(+ )",
            "(^ x 0)",
            "(^ x -2)",
            "(foo x)",
            "(< x 0",
            "(< x 0) trailing",
            "",
        ] {
            assert!(parse_formula(bad).is_err(), "expected error for {bad:?}");
        }
    }

    #[test]
    fn parse_reports_position() {
        let err = parse_formula("(and true\n  (< x y))").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.col > 0);
    }

    #[test]
    fn print_then_parse_round_trips() {
        for src in [
            "true",
            "false",
            "(< x 0)",
            "(and (< x 0) (> y 0))",
            "(or (= (+ (^ x 2) -1) 0) (not (<= (* 3 x y) 0)))",
            "(exists (x) (forall (y) (/= (- x y) 0)))",
            "(>= (+ (* 2 a b) (- (^ c 3)) 5) 0)",
        ] {
            let parsed = f(src);
            let printed = print_formula(&parsed);
            assert_eq!(f(&printed), parsed, "round trip through {printed}");
        }
    }

    #[test]
    fn printer_is_canonical_for_polys() {
        // All equivalent spellings print identically.
        let variants = [
            "(+ (* a x x) (* b x) c)",
            "(+ c (* b x) (* x a x))",
            "(- (+ (* a (^ x 2)) (* b x) c) 0)",
        ];
        let texts: Vec<String> = variants.iter().map(|s| print_poly(&p(s))).collect();
        assert_eq!(texts[0], texts[1]);
        assert_eq!(texts[0], texts[2]);
        assert_eq!(print_poly(&p("0")), "0");
        assert_eq!(print_poly(&p("(- x)")), "(- x)");
        assert_eq!(print_poly(&p("(- 0 5)")), "-5");
    }

    #[test]
    fn positive_form_pushes_negation() {
        // ¬(p ≤ 0 ∧ q = 0) → p > 0 ∨ q ≠ 0 with atoms normalized.
        let g = f("(not (and (<= (+ (* -2 x) 2) 0) (= y 0)))");
        let pf = positive_form(&g).unwrap();
        assert_eq!(pf, f("(or (< (+ x -1) 0) (/= y 0))"));
        // Double negation cancels.
        let g = f("(not (not (< x 0)))");
        assert_eq!(positive_form(&g).unwrap(), f("(< x 0)"));
        // ¬true → false.
        assert_eq!(positive_form(&f("(not true)")).unwrap(), Formula::False);
        // Quantifiers are rejected.
        assert_eq!(
            positive_form(&f("(exists (x) (< x 0))")),
            Err(FormulaError::ContainsQuantifier)
        );
    }

    #[test]
    fn atom_normalization() {
        // −2x + 2 ≤ 0 → x − 1 ≥ 0: content out, sign flipped, relation mirrored.
        let a = Atom::new(p("(+ (* -2 x) 2)"), Relation::Le).normalized();
        assert_eq!(a, Atom::new(p("(+ x -1)"), Relation::Ge));
        // Constants normalize to ±1 without deciding truth.
        let a = Atom::new(p("5"), Relation::Lt).normalized();
        assert_eq!(a, Atom::new(Polynomial::one(), Relation::Lt));
        let a = Atom::new(p("-7"), Relation::Lt).normalized();
        assert_eq!(a, Atom::new(Polynomial::one(), Relation::Gt));
        // Zero polynomial untouched.
        let a = Atom::new(Polynomial::zero(), Relation::Eq).normalized();
        assert_eq!(a.poly, Polynomial::zero());
    }

    #[test]
    fn fold_constants_decides_ground_atoms() {
        assert_eq!(fold_constants(&f("(< 5 0)")), Formula::False);
        assert_eq!(fold_constants(&f("(<= 0 0)")), Formula::True);
        assert_eq!(
            fold_constants(&f("(and (< -1 0) (> x 0))")),
            f("(> x 0)")
        );
        assert_eq!(
            fold_constants(&f("(or (< -1 0) (> x 0))")),
            Formula::True
        );
        assert_eq!(fold_constants(&f("(exists (x) (< 1 0))")), Formula::False);
        assert_eq!(fold_constants(&f("(not (= 0 0))")), Formula::False);
    }

    #[test]
    fn evaluate_exact() {
        let mut alpha = BTreeMap::new();
        alpha.insert("x".to_string(), Rational::new(BigInt::from(3), BigInt::from(2)));
        // x² − 3x + 2 at 3/2 is −1/4 < 0.
        let g = f("(< (+ (^ x 2) (* -3 x) 2) 0)");
        assert!(evaluate(&g, &alpha).unwrap());
        let g = f("(>= (+ (^ x 2) (* -3 x) 2) 0)");
        assert!(!evaluate(&g, &alpha).unwrap());
        // Unassigned variable is an error even under a decided conjunct.
        let g = f("(and (< 1 0) (< y 0))");
        assert!(matches!(
            evaluate(&g, &alpha),
            Err(FormulaError::Poly(PolyError::UnassignedParameter(_)))
        ));
    }

    #[test]
    fn atoms_dedup_in_document_order() {
        let g = f("(or (and (< x 0) (= y 0)) (and (< x 0) (> z 0)))");
        let got = atoms(&g).unwrap();
        assert_eq!(
            got,
            vec![
                Atom::new(p("x"), Relation::Lt),
                Atom::new(p("y"), Relation::Eq),
                Atom::new(p("z"), Relation::Gt),
            ]
        );
        // Same polynomial under a different relation is a distinct atom.
        let g = f("(and (< x 0) (<= x 0))");
        assert_eq!(atoms(&g).unwrap().len(), 2);
        assert_eq!(
            atoms(&f("(not (< x 0))")),
            Err(FormulaError::NotPositiveForm)
        );
    }

    #[test]
    fn smart_constructors_fold_constants_only() {
        let a = f("(< x 0)");
        let b = f("(> y 0)");
        assert_eq!(
            Formula::and_of([Formula::True, a.clone(), Formula::True]),
            a
        );
        assert_eq!(
            Formula::and_of([a.clone(), Formula::False, b.clone()]),
            Formula::False
        );
        assert_eq!(Formula::or_of([]), Formula::False);
        assert_eq!(Formula::and_of([]), Formula::True);
        let or = Formula::or_of([a.clone(), b.clone()]);
        assert_eq!(or, Formula::Or(vec![a, b]));
    }
}
