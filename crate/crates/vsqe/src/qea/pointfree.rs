//! Direct decision of queries whose coefficients are concrete integers,
//! with memoization keyed by coefficient vectors.
//!
//! A query about the parametric root (p, s) becomes, once p is concrete, a
//! statement about actual roots of an integer polynomial: isolate them
//! once, compute each root's derivative sign code once, and answer guard,
//! substitution, and shared-root queries by lookups. Repeated queries
//! against the same polynomial pair — the common case while eliminating a
//! quantifier block — hit the caches.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::realalg::{self, AlgebraicNumber, UniPoly};
use crate::thom::SignSequence;

use super::{QeError, QeQuery, QueryKind};

/// Isolated roots of one polynomial together with their derivative sign
/// codes at one code length.
struct RootData {
    roots: Vec<AlgebraicNumber>,
    codes: Vec<SignSequence>,
}

#[derive(Default)]
pub struct PointfreeEngine {
    /// (trimmed coefficient vector, code length) → isolated roots + codes.
    roots: RefCell<HashMap<(Vec<BigInt>, usize), Rc<RootData>>>,
    /// (p key, root index, q key, length) → signs of q, q′, …, q^(n).
    qsigns: RefCell<HashMap<(Vec<BigInt>, usize, Vec<BigInt>, usize), Rc<Vec<i8>>>>,
}

fn trim_key(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut v = coeffs.to_vec();
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

impl PointfreeEngine {
    pub fn new() -> Self {
        PointfreeEngine::default()
    }

    fn root_data(&self, coeffs: &[BigInt], n: usize) -> Result<Rc<RootData>, QeError> {
        let key = (trim_key(coeffs), n);
        if let Some(d) = self.roots.borrow().get(&key) {
            return Ok(Rc::clone(d));
        }
        let f = UniPoly::new(key.0.clone());
        let roots = if f.is_zero() || f.is_constant() {
            Vec::new()
        } else {
            realalg::isolate_roots(&f)?
        };
        let codes = roots
            .iter()
            .map(|r| SignSequence::from_slice(&realalg::derivative_signs_at(&f, r, n)))
            .collect();
        let data = Rc::new(RootData { roots, codes });
        self.roots.borrow_mut().insert(key, Rc::clone(&data));
        Ok(data)
    }

    /// Derivative sign codes realized by actual roots, ascending by root.
    pub fn realized_codes(
        &self,
        coeffs: &[BigInt],
        n: usize,
    ) -> Result<Vec<SignSequence>, QeError> {
        Ok(self.root_data(coeffs, n)?.codes.clone())
    }

    /// Signs of q, q′, …, q^(n) at root `idx` of p.
    fn q_signs(
        &self,
        p_coeffs: &[BigInt],
        idx: usize,
        q_coeffs: &[BigInt],
        n: usize,
    ) -> Result<Rc<Vec<i8>>, QeError> {
        let key = (trim_key(p_coeffs), idx, trim_key(q_coeffs), n);
        if let Some(s) = self.qsigns.borrow().get(&key) {
            return Ok(Rc::clone(s));
        }
        let data = self.root_data(p_coeffs, n)?;
        let root = &data.roots[idx];
        let q = UniPoly::new(key.2.clone());
        let mut signs = Vec::with_capacity(n + 1);
        signs.push(realalg::sign_at_algebraic(&q, root));
        signs.extend(realalg::derivative_signs_at(&q, root, n));
        let signs = Rc::new(signs);
        self.qsigns.borrow_mut().insert(key, Rc::clone(&signs));
        Ok(signs)
    }

    /// Decide a query whose coefficients are concrete integers. Both
    /// coefficient slices are indexed by power of the root variable.
    pub fn decide(
        &self,
        query: &QeQuery,
        p_coeffs: &[BigInt],
        q_coeffs: Option<&[BigInt]>,
    ) -> Result<bool, QeError> {
        let n = query.degree;
        let data = self.root_data(p_coeffs, n)?;
        let find = |s: &SignSequence| data.codes.iter().position(|c| c == s);
        match &query.kind {
            QueryKind::Guard { s } => Ok(find(s).is_some()),
            QueryKind::Subst { s, rel } => {
                let q = q_coeffs.ok_or_else(|| {
                    QeError::MissingCoefficient("substituted polynomial".into())
                })?;
                match find(s) {
                    None => Ok(false),
                    Some(idx) => {
                        let signs = self.q_signs(p_coeffs, idx, q, n)?;
                        Ok(rel.holds_for_sign(signs[0]))
                    }
                }
            }
            QueryKind::Nu { s, t } => {
                let q = q_coeffs.ok_or_else(|| {
                    QeError::MissingCoefficient("substituted polynomial".into())
                })?;
                match find(s) {
                    None => Ok(false),
                    Some(idx) => {
                        let signs = self.q_signs(p_coeffs, idx, q, n)?;
                        Ok(signs[0] == 0 && signs[1..] == *t.signs())
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Relation;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn seq(s: &[i8]) -> SignSequence {
        SignSequence::from_slice(s)
    }

    #[test]
    fn guard_queries() {
        let pf = PointfreeEngine::new();
        // p = x² − 3x + 2, roots 1 (code (−1,1)) and 2 (code (1,1)).
        let p = big(&[2, -3, 1]);
        let q = |kind| QeQuery { degree: 2, kind };
        assert!(pf.decide(&q(QueryKind::Guard { s: seq(&[-1, 1]) }), &p, None).unwrap());
        assert!(pf.decide(&q(QueryKind::Guard { s: seq(&[1, 1]) }), &p, None).unwrap());
        assert!(!pf.decide(&q(QueryKind::Guard { s: seq(&[0, 1]) }), &p, None).unwrap());
        // Linear polynomial padded to degree 2: x − 1 has code (1, 0).
        let l = big(&[-1, 1, 0]);
        assert!(pf.decide(&q(QueryKind::Guard { s: seq(&[1, 0]) }), &l, None).unwrap());
        assert!(!pf.decide(&q(QueryKind::Guard { s: seq(&[1, 1]) }), &l, None).unwrap());
        // The zero polynomial realizes no nonzero code.
        let z = big(&[0, 0, 0]);
        assert!(!pf.decide(&q(QueryKind::Guard { s: seq(&[1, 0]) }), &z, None).unwrap());
    }

    #[test]
    fn subst_queries() {
        let pf = PointfreeEngine::new();
        let p = big(&[2, -3, 1]);
        // q = x − 1 vanishes at root 1, positive at root 2.
        let q = big(&[-1, 1, 0]);
        let mk = |s: &[i8], rel| QeQuery {
            degree: 2,
            kind: QueryKind::Subst { s: seq(s), rel },
        };
        assert!(pf.decide(&mk(&[-1, 1], Relation::Eq), &p, Some(&q)).unwrap());
        assert!(!pf.decide(&mk(&[-1, 1], Relation::Lt), &p, Some(&q)).unwrap());
        assert!(pf.decide(&mk(&[-1, 1], Relation::Le), &p, Some(&q)).unwrap());
        assert!(pf.decide(&mk(&[1, 1], Relation::Gt), &p, Some(&q)).unwrap());
        // Guard not realized → false regardless of relation.
        assert!(!pf.decide(&mk(&[0, 1], Relation::Ne), &p, Some(&q)).unwrap());
        assert!(pf.decide(&mk(&[1, 1], Relation::Ne), &p, Some(&q)).unwrap());
    }

    #[test]
    fn nu_queries() {
        let pf = PointfreeEngine::new();
        // p = x² − 3x + 2 and q = x² − 1 share the root 1; q's code there
        // is (2·1 = 2 > 0, 2 > 0) = (1, 1).
        let p = big(&[2, -3, 1]);
        let q = big(&[-1, 0, 1]);
        let mk = |s: &[i8], t: &[i8]| QeQuery {
            degree: 2,
            kind: QueryKind::Nu { s: seq(s), t: seq(t) },
        };
        assert!(pf.decide(&mk(&[-1, 1], &[1, 1]), &p, Some(&q)).unwrap());
        assert!(!pf.decide(&mk(&[-1, 1], &[-1, 1]), &p, Some(&q)).unwrap());
        // Root 2 of p is not a root of q.
        assert!(!pf.decide(&mk(&[1, 1], &[1, 1]), &p, Some(&q)).unwrap());
        // Double root: p = (x−1)², q = x − 1: q's code at 1 is (1, 0).
        let dp = big(&[1, -2, 1]);
        let dq = big(&[-1, 1, 0]);
        assert!(pf.decide(&mk(&[0, 1], &[1, 0]), &dp, Some(&dq)).unwrap());
        assert!(!pf.decide(&mk(&[0, 1], &[1, 1]), &dp, Some(&dq)).unwrap());
    }

    #[test]
    fn memoization_is_transparent() {
        let pf = PointfreeEngine::new();
        let p = big(&[2, -3, 1]);
        let g = QeQuery { degree: 2, kind: QueryKind::Guard { s: seq(&[-1, 1]) } };
        assert!(pf.decide(&g, &p, None).unwrap());
        assert!(pf.decide(&g, &p, None).unwrap());
        // Trailing zeros do not split the cache key.
        let padded = big(&[2, -3, 1, 0, 0]);
        assert!(pf.decide(&g, &padded, None).unwrap());
        assert_eq!(pf.roots.borrow().len(), 1);
    }
}
