//! Virtual substitution of nonstandard test points into quantifier-free
//! formulas.
//!
//! A test point is either −∞, a parametric root ξ of a polynomial p
//! (identified by its derivative sign code), or ξ + ε for an
//! infinitesimal ε. Substituting such a point for a variable in an atom
//! q ρ 0 does not produce a term that can be plugged in literally;
//! instead each atom is replaced by a quantifier-free condition on the
//! remaining parameters that holds exactly when the atom holds at the
//! point. The conditions for root points are answered by a query
//! [`Engine`]; the −∞ image is purely structural in the coefficients.

use thiserror::Error;

use crate::formula::{atoms as formula_atoms, positive_form, Atom, Formula, FormulaError, Relation};
use crate::poly::{PolyError, Polynomial};
use crate::qea::{Engine, QeError, QeQuery, QueryKind};
use crate::thom::{all_candidate_codes, sgnr_comb, ParametricRoot, ThomError};

#[derive(Debug, Error)]
pub enum VsError {
    /// An atom's degree in the eliminated variable exceeds what the
    /// root's sign code length (the framework degree) can express.
    #[error("degree {degree} in `{var}` exceeds the framework degree {bound}")]
    DegreeExceedsBound { var: String, degree: usize, bound: usize },
    /// A root test point was built for one variable but substituted for
    /// another.
    #[error("test point eliminates `{expected}` but `{got}` was requested")]
    VariableMismatch { expected: String, got: String },
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Thom(#[from] ThomError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A candidate value for the eliminated variable — one member of an
/// elimination set.
#[derive(Clone, Debug, PartialEq)]
pub enum EliminationTerm {
    /// A value below every root of every polynomial in sight.
    MinusInfinity,
    /// The root of `p` singled out by the derivative sign code.
    Root(ParametricRoot),
    /// Immediately to the right of that root.
    RootPlusEps(ParametricRoot),
}

impl EliminationTerm {
    /// The parametric root this point is anchored at, if any.
    pub fn root(&self) -> Option<&ParametricRoot> {
        match self {
            EliminationTerm::MinusInfinity => None,
            EliminationTerm::Root(r) | EliminationTerm::RootPlusEps(r) => Some(r),
        }
    }
}

impl std::fmt::Display for EliminationTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EliminationTerm::MinusInfinity => write!(f, "-inf"),
            EliminationTerm::Root(r) => write!(f, "root{}({})", r.s, r.p),
            EliminationTerm::RootPlusEps(r) => write!(f, "root{}({}) + eps", r.s, r.p),
        }
    }
}

/// Coefficients of `q` in `var`, constant term first, padded with zero
/// polynomials to length `n + 1`. Fails if deg_var(q) > n.
fn coeff_vec(q: &Polynomial, var: &str, n: usize) -> Result<Vec<Polynomial>, VsError> {
    let deg = q.degree_in(var);
    if deg > n {
        return Err(VsError::DegreeExceedsBound {
            var: var.to_string(),
            degree: deg,
            bound: n,
        });
    }
    let mut cs = q.coeffs_in(var, n + 1)?;
    cs.reverse();
    Ok(cs)
}

/// The image of the atom q ρ 0 under x ↦ −∞: a sign condition on the
/// coefficients of q as a polynomial in x. No engine is needed.
pub fn minus_inf_atom(atom: &Atom, var: &str) -> Formula {
    let deg = atom.poly.degree_in(var);
    let mut coeffs = atom
        .poly
        .coeffs_in(var, deg + 1)
        .expect("length covers the degree");
    coeffs.reverse(); // constant term first

    let all_zero = || {
        Formula::and_of(
            coeffs
                .iter()
                .filter(|b| !b.is_zero())
                .map(|b| Formula::atom(b.clone(), Relation::Eq)),
        )
    };
    // Sign of q at −∞ when b_j is the leading nonzero coefficient:
    // sign((−1)^j · b_j). One disjunct per candidate leading index.
    let limit_sign = |rel: Relation| {
        let mut cases = Vec::new();
        for j in (0..coeffs.len()).rev() {
            let mut conj: Vec<Formula> = coeffs[j + 1..]
                .iter()
                .map(|b| Formula::atom(b.clone(), Relation::Eq))
                .collect();
            let lead = if j % 2 == 1 { -&coeffs[j] } else { coeffs[j].clone() };
            conj.push(Formula::atom(lead, rel));
            cases.push(Formula::and_of(conj));
        }
        Formula::or_of(cases)
    };

    match atom.rel {
        Relation::Eq => all_zero(),
        Relation::Ne => Formula::or_of(
            coeffs
                .iter()
                .filter(|b| !b.is_zero())
                .map(|b| Formula::atom(b.clone(), Relation::Ne)),
        ),
        Relation::Lt => limit_sign(Relation::Lt),
        Relation::Gt => limit_sign(Relation::Gt),
        Relation::Le => Formula::or_of([limit_sign(Relation::Lt), all_zero()]),
        Relation::Ge => Formula::or_of([limit_sign(Relation::Gt), all_zero()]),
    }
}

/// The image of q ρ 0 under x ↦ ξ where ξ is the given parametric root.
pub fn root_atom(atom: &Atom, root: &ParametricRoot, engine: &Engine) -> Result<Formula, VsError> {
    let n = root.degree();
    let p_coeffs = coeff_vec(&root.p, &root.var, n)?;
    let q_coeffs = coeff_vec(&atom.poly, &root.var, n)?;
    let query = QeQuery::new(n, QueryKind::Subst { s: root.s.clone(), rel: atom.rel });
    Ok(engine.resolve(&query, &p_coeffs, Some(&q_coeffs))?)
}

/// The condition that the root of p selected by code s is simultaneously
/// a root of q whose own derivative signs there are t.
pub fn nu(
    root: &ParametricRoot,
    q: &Polynomial,
    t: &crate::thom::SignSequence,
    engine: &Engine,
) -> Result<Formula, VsError> {
    let n = root.degree();
    let p_coeffs = coeff_vec(&root.p, &root.var, n)?;
    let q_coeffs = coeff_vec(q, &root.var, n)?;
    let query = QeQuery::new(n, QueryKind::Nu { s: root.s.clone(), t: t.clone() });
    Ok(engine.resolve(&query, &p_coeffs, Some(&q_coeffs))?)
}

/// The image of q ρ 0 under x ↦ ξ + ε.
///
/// For an infinitesimal ε the sign of q at ξ + ε is the sign of q at ξ
/// unless ξ is a root of q, in which case it is the sign immediately to
/// the right of that root — determined by q's own derivative code there.
/// A nonzero q therefore satisfies q(ξ+ε) = 0 never, and q(ξ+ε) < 0
/// exactly when q(ξ) < 0 or ξ is a root of q with right sign −1.
pub fn eps_atom(atom: &Atom, root: &ParametricRoot, engine: &Engine) -> Result<Formula, VsError> {
    let n = root.degree();
    let var = root.var.as_str();
    let q_coeffs = coeff_vec(&atom.poly, var, n)?;

    let identically_zero = |coeffs: &[Polynomial]| {
        Formula::and_of(
            coeffs
                .iter()
                .filter(|b| !b.is_zero())
                .map(|b| Formula::atom(b.clone(), Relation::Eq)),
        )
    };
    // q ρ 0 at ξ + ε for strict ρ: either q already has that sign at ξ,
    // or ξ is a root of q that q leaves to the named side.
    let strict = |side: i8| -> Result<Formula, VsError> {
        let rel = if side < 0 { Relation::Lt } else { Relation::Gt };
        let shifted = Atom::new(atom.poly.clone(), rel);
        let mut cases = vec![root_atom(&shifted, root, engine)?];
        for t in all_candidate_codes(n) {
            if sgnr_comb(&t)? == side {
                cases.push(nu(root, &atom.poly, &t, engine)?);
            }
        }
        Ok(Formula::or_of(cases))
    };

    Ok(match atom.rel {
        Relation::Eq => identically_zero(&q_coeffs),
        Relation::Ne => Formula::or_of(
            q_coeffs
                .iter()
                .filter(|b| !b.is_zero())
                .map(|b| Formula::atom(b.clone(), Relation::Ne)),
        ),
        Relation::Lt => strict(-1)?,
        Relation::Gt => strict(1)?,
        Relation::Le => Formula::or_of([strict(-1)?, identically_zero(&q_coeffs)]),
        Relation::Ge => Formula::or_of([strict(1)?, identically_zero(&q_coeffs)]),
    })
}

/// The image of a single atom under the test point. Atoms not involving
/// the variable pass through unchanged.
pub fn substitute_atom(
    atom: &Atom,
    var: &str,
    point: &EliminationTerm,
    engine: &Engine,
) -> Result<Formula, VsError> {
    if atom.poly.degree_in(var) == 0 {
        return Ok(Formula::Atom(atom.clone()));
    }
    if let Some(root) = point.root() {
        if root.var != var {
            return Err(VsError::VariableMismatch {
                expected: root.var.clone(),
                got: var.to_string(),
            });
        }
    }
    match point {
        EliminationTerm::MinusInfinity => Ok(minus_inf_atom(atom, var)),
        EliminationTerm::Root(root) => root_atom(atom, root, engine),
        EliminationTerm::RootPlusEps(root) => eps_atom(atom, root, engine),
    }
}

/// The image of a quantifier-free formula under the test point: the
/// formula is brought to positive form, each atom is replaced by its
/// image, and constants are folded. The result no longer mentions `var`.
pub fn substitute(
    f: &Formula,
    var: &str,
    point: &EliminationTerm,
    engine: &Engine,
) -> Result<Formula, VsError> {
    let pf = positive_form(f)?;
    fn walk(
        f: &Formula,
        var: &str,
        point: &EliminationTerm,
        engine: &Engine,
    ) -> Result<Formula, VsError> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(a) => substitute_atom(a, var, point, engine)?,
            Formula::And(cs) => Formula::and_of(
                cs.iter()
                    .map(|c| walk(c, var, point, engine))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            Formula::Or(cs) => Formula::or_of(
                cs.iter()
                    .map(|c| walk(c, var, point, engine))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            // positive_form leaves neither negations nor quantifiers.
            Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => {
                unreachable!("positive form")
            }
        })
    }
    let image = walk(&pf, var, point, engine)?;
    debug_assert!(
        formula_atoms(&image)
            .map(|ats| ats.iter().all(|a| a.poly.degree_in(var) == 0))
            .unwrap_or(true),
        "substitution image still mentions the eliminated variable"
    );
    Ok(crate::formula::fold_constants(&image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::qea::Engine;
    use crate::thom::SignSequence;

    fn seq(v: &[i8]) -> SignSequence {
        SignSequence::new(v.to_vec()).unwrap()
    }

    fn parse(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn parse_poly(s: &str) -> Polynomial {
        crate::formula::parse_poly(s).unwrap()
    }

    fn engine() -> Engine {
        use crate::qea::BackendKind;
        Engine::with_builtin_tables(vec![BackendKind::Tables, BackendKind::Pointfree])
    }

    #[test]
    fn minus_inf_images() {
        // x² − 1 → +∞ as x → −∞, so < 0 is unsatisfiable and > 0 holds.
        let q = parse("(< (- (* x x) 1) 0)");
        let f = substitute(&q, "x", &EliminationTerm::MinusInfinity, &engine()).unwrap();
        assert_eq!(f, Formula::False);
        let q = parse("(> (- (* x x) 1) 0)");
        let f = substitute(&q, "x", &EliminationTerm::MinusInfinity, &engine()).unwrap();
        assert_eq!(f, Formula::True);
        // a·x + b with parameters: q(−∞) = 0 iff a = 0 ∧ b = 0.
        let q = parse("(= (+ (* a x) b) 0)");
        let f = substitute(&q, "x", &EliminationTerm::MinusInfinity, &engine()).unwrap();
        assert_eq!(f.to_string(), "(and (= b 0) (= a 0))");
        // q(−∞) < 0 iff (−a < 0) ∨ (a = 0 ∧ b < 0).
        let q = parse("(< (+ (* a x) b) 0)");
        let f = substitute(&q, "x", &EliminationTerm::MinusInfinity, &engine()).unwrap();
        assert_eq!(f.to_string(), "(or (< (- a) 0) (and (= a 0) (< b 0)))");
    }

    #[test]
    fn root_image_concrete() {
        // p = x² − 2 with code (+,+) selects √2; q = x − 1 is positive there.
        let e = engine();
        let p = parse_poly("(- (* x x) 2)");
        let root = ParametricRoot::new(p, "x", seq(&[1, 1]));
        let q = parse("(> (- x 1) 0)");
        let f = substitute(&q, "x", &EliminationTerm::Root(root.clone()), &e).unwrap();
        assert_eq!(f, Formula::True);
        // Code (−,+) selects −√2; x − 1 is negative there.
        let root2 = ParametricRoot::new(root.p.clone(), "x", seq(&[-1, 1]));
        let q = parse("(> (- x 1) 0)");
        let f = substitute(&q, "x", &EliminationTerm::Root(root2), &e).unwrap();
        assert_eq!(f, Formula::False);
    }

    #[test]
    fn eps_image_concrete() {
        // At √2 + ε: x² − 2 is strictly positive (the root has right sign +).
        let e = engine();
        let p = parse_poly("(- (* x x) 2)");
        let root = ParametricRoot::new(p.clone(), "x", seq(&[1, 1]));
        let point = EliminationTerm::RootPlusEps(root);
        let f = substitute(&parse("(> (- (* x x) 2) 0)"), "x", &point, &e).unwrap();
        assert_eq!(f, Formula::True);
        let f = substitute(&parse("(= (- (* x x) 2) 0)"), "x", &point, &e).unwrap();
        assert_eq!(f, Formula::False);
        let f = substitute(&parse("(<= (- (* x x) 2) 0)"), "x", &point, &e).unwrap();
        assert_eq!(f, Formula::False);
        // At −√2 + ε the parabola has just crossed downward: strictly negative.
        let root = ParametricRoot::new(p, "x", seq(&[-1, 1]));
        let point = EliminationTerm::RootPlusEps(root);
        let f = substitute(&parse("(< (- (* x x) 2) 0)"), "x", &point, &e).unwrap();
        assert_eq!(f, Formula::True);
    }

    #[test]
    fn eps_of_zero_polynomial_atom() {
        // 0·x² ≡ 0: the ≤/=/≥ images are true, the strict ones false.
        let e = engine();
        let p = parse_poly("(- (* x x) 2)");
        let root = ParametricRoot::new(p, "x", seq(&[1, 1]));
        let point = EliminationTerm::RootPlusEps(root);
        // An atom whose polynomial cancels to zero never mentions x, so
        // build one that does mention x but folds: (x − x) is zero.
        let f = substitute(&parse("(= (- x x) 0)"), "x", &point, &e).unwrap();
        assert_eq!(f, Formula::True);
    }

    #[test]
    fn parameter_only_atoms_pass_through() {
        let e = engine();
        let p = parse_poly("(- (* x x) 2)");
        let root = ParametricRoot::new(p, "x", seq(&[1, 1]));
        let f = parse("(and (> a 0) (> x 0))");
        let got = substitute(&f, "x", &EliminationTerm::Root(root), &e).unwrap();
        // x > 0 is true at √2 and folds away, leaving a > 0 alone.
        assert_eq!(got.to_string(), "(> a 0)");
    }

    #[test]
    fn parametric_linear_root_image() {
        // p = a·x + b with a > 0 (code (+)); q = x. The image keeps the
        // guard a > 0 and constrains −b (the numerator of the root).
        let e = engine();
        let p = parse_poly("(+ (* a x) b)");
        let root = ParametricRoot::new(p, "x", seq(&[1]));
        let f = substitute(&parse("(< x 0)"), "x", &EliminationTerm::Root(root), &e).unwrap();
        assert_eq!(f.to_string(), "(and (> a 0) (< (- b) 0))");
        // Fully concrete: the root of x + 2 is −2, which is negative.
        let p = parse_poly("(+ x 2)");
        let root = ParametricRoot::new(p, "x", seq(&[1]));
        let f = substitute(&parse("(< x 0)"), "x", &EliminationTerm::Root(root), &e).unwrap();
        assert_eq!(f, Formula::True);
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let e = engine();
        let p = parse_poly("(- (* x x) 2)");
        let root = ParametricRoot::new(p, "x", seq(&[1, 1]));
        let err = substitute(&parse("(< y 0)"), "y", &EliminationTerm::Root(root), &e);
        assert!(matches!(err, Err(VsError::VariableMismatch { .. })));
    }

    #[test]
    fn degree_too_high_is_an_error() {
        let e = engine();
        let p = parse_poly("(- (* x x) 2)");
        let root = ParametricRoot::new(p, "x", seq(&[1, 1]));
        let err = substitute(
            &parse("(< (* x x x) 0)"),
            "x",
            &EliminationTerm::Root(root),
            &e,
        );
        assert!(matches!(err, Err(VsError::DegreeExceedsBound { degree: 3, bound: 2, .. })));
    }
}
