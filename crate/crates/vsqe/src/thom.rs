//! Parametric roots described by derivative sign sequences (Thom codes),
//! their defining first-order conditions, and the combinatorial left/right
//! sign rules that drive elimination-set construction.
//!
//! A parametric root of a polynomial p of degree at most n in the chosen
//! variable is a pair (p, s) with s a length-n sign sequence prescribing
//! the signs of p′, p″, …, p^(n) at the root. At any parameter point where
//! the guard formula of (p, s) holds, p has exactly one real root with
//! those derivative signs, so the pair denotes a well-defined root as the
//! parameters vary.

use num_bigint::BigInt;
use thiserror::Error;

use crate::formula::{Formula, Relation};
use crate::poly::{Polynomial, Rational};
use crate::realalg::{self, AlgebraicNumber, RealAlgError, UniPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThomError {
    #[error("sign sequence is identically zero")]
    ZeroSignSequence,
    #[error("sign sequence entries must be -1, 0, or +1")]
    InvalidSignValue,
    #[error("guard does not hold at the given point")]
    GuardFailsAtPoint,
    #[error(transparent)]
    RealAlg(#[from] RealAlgError),
}

/// A finite sequence over {−1, 0, +1}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignSequence(Vec<i8>);

impl SignSequence {
    pub fn new(signs: Vec<i8>) -> Result<Self, ThomError> {
        if signs.iter().any(|&s| !(-1..=1).contains(&s)) {
            return Err(ThomError::InvalidSignValue);
        }
        Ok(SignSequence(signs))
    }

    pub fn from_slice(signs: &[i8]) -> Self {
        SignSequence::new(signs.to_vec()).expect("sign entries in {-1,0,1}")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }
}

macro_rules! fmt_signs {
    () => {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            write!(f, "(")?;
            for (i, s) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                match s {
                    -1 => write!(f, "-")?,
                    0 => write!(f, "0")?,
                    _ => write!(f, "+")?,
                }
            }
            write!(f, ")")
        }
    };
}

impl std::fmt::Debug for SignSequence {
    fmt_signs!();
}

impl std::fmt::Display for SignSequence {
    fmt_signs!();
}

/// The relation a sign prescribes: −1 ↦ <, 0 ↦ =, +1 ↦ >.
pub fn sigma(s: i8) -> Relation {
    match s {
        -1 => Relation::Lt,
        0 => Relation::Eq,
        _ => Relation::Gt,
    }
}

/// A parametric root: polynomial, root variable, and the prescribed
/// derivative sign sequence. The sequence length fixes the framework
/// degree; it may exceed the polynomial's actual degree in the variable
/// (the extra derivatives are identically zero, so only all-zero-padded
/// sequences can hold there).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricRoot {
    pub p: Polynomial,
    pub var: String,
    pub s: SignSequence,
}

impl ParametricRoot {
    pub fn new(p: Polynomial, var: impl Into<String>, s: SignSequence) -> Self {
        ParametricRoot { p, var: var.into(), s }
    }

    pub fn degree(&self) -> usize {
        self.s.len()
    }
}

/// The conjuncts p = 0, p′ σ(s₁) 0, …, p^(n) σ(sₙ) 0 describing "the
/// variable sits at a root of p with derivative signs s".
pub fn root_conditions(p: &Polynomial, var: &str, s: &SignSequence) -> Vec<Formula> {
    let mut out = Vec::with_capacity(s.len() + 1);
    out.push(Formula::atom(p.clone(), Relation::Eq));
    for i in 0..s.len() {
        let d = p.derive(var, i + 1);
        out.push(Formula::atom(d, sigma(s.get(i))));
    }
    out
}

/// The defining sentence of the guard: ∃ var (p = 0 ∧ ⋀ᵢ p^(i) σ(sᵢ) 0).
/// Quantified, so not itself quantifier-free; the table layer supplies the
/// equivalent quantifier-free guard per sign sequence.
pub fn guard_tarski(root: &ParametricRoot) -> Result<Formula, ThomError> {
    if root.s.is_zero() {
        return Err(ThomError::ZeroSignSequence);
    }
    let body = Formula::and_of(root_conditions(&root.p, &root.var, &root.s));
    Ok(Formula::Exists(root.var.clone(), Box::new(body)))
}

/// All length-n sign sequences except the identically-zero one, in
/// lexicographic order with −1 < 0 < +1.
pub fn all_candidate_codes(n: usize) -> Vec<SignSequence> {
    let mut out = Vec::with_capacity(3usize.pow(n as u32).saturating_sub(1));
    let mut cur = vec![-1i8; n];
    loop {
        let seq = SignSequence::from_slice(&cur);
        if !seq.is_zero() {
            out.push(seq);
        }
        // Increment in base 3 over {−1, 0, +1}.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < 1 {
                cur[i] += 1;
                for c in &mut cur[i + 1..] {
                    *c = -1;
                }
                break;
            }
        }
    }
}

/// Index k of the first nonzero entry, 1-based.
fn first_nonzero(s: &SignSequence) -> Result<usize, ThomError> {
    s.signs()
        .iter()
        .position(|&x| x != 0)
        .map(|i| i + 1)
        .ok_or(ThomError::ZeroSignSequence)
}

/// Sign of p immediately to the right of the root, read off the code:
/// the first nonzero derivative sign.
pub fn sgnr_comb(s: &SignSequence) -> Result<i8, ThomError> {
    let k = first_nonzero(s)?;
    Ok(s.get(k - 1))
}

/// Sign of p immediately to the left of the root: (−1)^k times the first
/// nonzero derivative sign s_k.
pub fn sgnl_comb(s: &SignSequence) -> Result<i8, ThomError> {
    let k = first_nonzero(s)?;
    let flip = if k % 2 == 1 { -1 } else { 1 };
    Ok(flip * s.get(k - 1))
}

/// Numeric check of the left/right signs at a concrete instance: find the
/// root of `f` carrying the code, then read the sign of `f` at the
/// isolating interval's endpoints. Errors when no root realizes the code.
pub fn sgn_lr_numeric(f: &UniPoly, s: &SignSequence) -> Result<(i8, i8), ThomError> {
    if s.is_zero() {
        return Err(ThomError::ZeroSignSequence);
    }
    let root: AlgebraicNumber = realalg::find_root_by_code(f, s.signs())?
        .ok_or(ThomError::GuardFailsAtPoint)?;
    // No other root of f lies in the isolating interval and the endpoints
    // are non-roots, so f keeps one sign on each side up to the root.
    let left = f.sign_at(root.lo());
    let right = f.sign_at(root.hi());
    debug_assert!(left != 0 && right != 0);
    Ok((left, right))
}

/// Evaluate the derivative-sign code of the single root of `f` isolated in
/// `root`, padded/truncated to length n.
pub fn numeric_code(f: &UniPoly, root: &AlgebraicNumber, n: usize) -> SignSequence {
    SignSequence::from_slice(&realalg::derivative_signs_at(f, root, n))
}

/// Instantiate a parametric root's polynomial at rational parameter
/// values and locate the concrete root carrying the prescribed code.
pub fn instantiate_root(
    root: &ParametricRoot,
    alpha: &std::collections::BTreeMap<String, Rational>,
) -> Result<AlgebraicNumber, ThomError> {
    if root.s.is_zero() {
        return Err(ThomError::ZeroSignSequence);
    }
    let rp = root
        .p
        .eval_params(&root.var, alpha)
        .map_err(RealAlgError::from)?;
    let f = UniPoly::from_poly(&rp.num, &root.var)?;
    if f.is_zero() {
        // Every point is a root but no nonzero code can hold anywhere.
        return Err(ThomError::GuardFailsAtPoint);
    }
    realalg::find_root_by_code(&f, root.s.signs())?.ok_or(ThomError::GuardFailsAtPoint)
}

/// Convenience: a generic univariate polynomial u_d·x^d + … + u_1·x + u_0
/// in `var` with fresh parameter names `prefix0..prefixd`.
pub fn generic_poly(prefix: &str, var: &str, degree: usize) -> Polynomial {
    let mut acc = Polynomial::zero();
    for i in 0..=degree {
        let c = Polynomial::variable(&format!("{prefix}{i}"));
        let x = Polynomial::term(BigInt::from(1), var, i as u32);
        acc = &acc + &(&c * &x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::print_formula;
    use std::collections::BTreeMap;

    fn seq(s: &[i8]) -> SignSequence {
        SignSequence::from_slice(s)
    }

    #[test]
    fn sign_sequence_basics() {
        assert!(SignSequence::new(vec![2]).is_err());
        assert!(seq(&[0, 0]).is_zero());
        assert!(!seq(&[0, 1]).is_zero());
        assert_eq!(format!("{}", seq(&[-1, 0, 1])), "(-,0,+)");
    }

    #[test]
    fn candidate_codes_enumeration() {
        // Degree 1: two codes.
        let c1 = all_candidate_codes(1);
        assert_eq!(c1, vec![seq(&[-1]), seq(&[1])]);
        // Degree 2: the eight nonzero codes in lexicographic order.
        let c2 = all_candidate_codes(2);
        let expect: Vec<SignSequence> = [
            [-1, -1], [-1, 0], [-1, 1], [0, -1], [0, 1], [1, -1], [1, 0], [1, 1],
        ]
        .iter()
        .map(|s| seq(s))
        .collect();
        assert_eq!(c2, expect);
        assert_eq!(all_candidate_codes(3).len(), 26);
    }

    #[test]
    fn root_conditions_shape() {
        // p = x² − 3x + 2, s = (−1, +1)
        let p = crate::formula::parse_poly("(+ (^ x 2) (* -3 x) 2)").unwrap();
        let conds = root_conditions(&p, "x", &seq(&[-1, 1]));
        assert_eq!(conds.len(), 3);
        assert_eq!(print_formula(&conds[0]), "(= (+ (^ x 2) (* -3 x) 2) 0)");
        assert_eq!(print_formula(&conds[1]), "(< (+ (* 2 x) -3) 0)");
        assert_eq!(print_formula(&conds[2]), "(> 2 0)");
    }

    #[test]
    fn guard_tarski_quantifies() {
        let p = crate::formula::parse_poly("(+ (* a x) b)").unwrap();
        let root = ParametricRoot::new(p, "x", seq(&[1]));
        let g = guard_tarski(&root).unwrap();
        assert_eq!(print_formula(&g), "(exists (x) (and (= (+ b (* a x)) 0) (> a 0)))");
        let zero = ParametricRoot::new(Polynomial::variable("x"), "x", seq(&[0]));
        assert_eq!(guard_tarski(&zero), Err(ThomError::ZeroSignSequence));
    }

    #[test]
    fn combinatorial_left_right_signs() {
        // First nonzero entry s_k with k = 1: left = −s₁, right = s₁.
        assert_eq!((sgnl_comb(&seq(&[-1, -1])).unwrap(), sgnr_comb(&seq(&[-1, -1])).unwrap()), (1, -1));
        assert_eq!((sgnl_comb(&seq(&[1, 1])).unwrap(), sgnr_comb(&seq(&[1, 1])).unwrap()), (-1, 1));
        // k = 2: left = +s₂.
        assert_eq!((sgnl_comb(&seq(&[0, 1])).unwrap(), sgnr_comb(&seq(&[0, 1])).unwrap()), (1, 1));
        assert_eq!((sgnl_comb(&seq(&[0, -1])).unwrap(), sgnr_comb(&seq(&[0, -1])).unwrap()), (-1, -1));
        assert_eq!(sgnl_comb(&seq(&[0, 0])), Err(ThomError::ZeroSignSequence));
    }

    #[test]
    fn numeric_left_right_signs_agree_with_codes() {
        // x² − 3x + 2 at root 1 (code (−1,1)): + on the left, − on the right.
        let f = UniPoly::from_i64(&[2, -3, 1]);
        assert_eq!(sgn_lr_numeric(&f, &seq(&[-1, 1])).unwrap(), (1, -1));
        // At root 2 (code (1,1)): − left, + right.
        assert_eq!(sgn_lr_numeric(&f, &seq(&[1, 1])).unwrap(), (-1, 1));
        // Double root of −(x−1)²: code (0,−1), negative on both sides.
        let g = UniPoly::from_i64(&[-1, 2, -1]);
        assert_eq!(sgn_lr_numeric(&g, &seq(&[0, -1])).unwrap(), (-1, -1));
        // Linear x − 1 inside degree 2: code (1, 0).
        let l = UniPoly::from_i64(&[-1, 1]);
        assert_eq!(sgn_lr_numeric(&l, &seq(&[1, 0])).unwrap(), (-1, 1));
        // Code not realized.
        assert_eq!(sgn_lr_numeric(&f, &seq(&[0, 1])), Err(ThomError::GuardFailsAtPoint));
    }

    #[test]
    fn instantiate_parametric_root() {
        // p = a·x² + b·x + c at a=1, b=-3, c=2 with code (−1, 1) → root 1.
        let p = crate::formula::parse_poly(
            "(+ (* a (^ x 2)) (* b x) c)",
        )
        .unwrap();
        let root = ParametricRoot::new(p.clone(), "x", seq(&[-1, 1]));
        let mut alpha = BTreeMap::new();
        alpha.insert("a".into(), Rational::from(BigInt::from(1)));
        alpha.insert("b".into(), Rational::from(BigInt::from(-3)));
        alpha.insert("c".into(), Rational::from(BigInt::from(2)));
        let xi = instantiate_root(&root, &alpha).unwrap();
        assert_eq!(xi.cmp_rational(&Rational::from(BigInt::from(1))), std::cmp::Ordering::Equal);
        // Code (0, 1) is not realized there.
        let bad = ParametricRoot::new(p, "x", seq(&[0, 1]));
        assert!(matches!(
            instantiate_root(&bad, &alpha),
            Err(ThomError::GuardFailsAtPoint)
        ));
    }

    #[test]
    fn generic_polynomial_layout() {
        let g = generic_poly("u", "x", 2);
        assert_eq!(
            crate::formula::print_poly(&g),
            "(+ (* u2 (^ x 2)) (* u1 x) u0)"
        );
    }
}
