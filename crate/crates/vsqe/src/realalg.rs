//! Exact real-root machinery: dense univariate polynomials over big
//! integers, Sturm chains, root isolation by Cauchy bound plus bisection,
//! signs at algebraic points, and the one-variable decision procedure the
//! rest of the crate uses as its ground-truth oracle.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::formula::{self, Atom, Formula, FormulaError};
use crate::poly::{sign_of, PolyError, Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealAlgError {
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("point is not a root of the polynomial")]
    NotARoot,
    #[error("polynomial mentions more than the root variable")]
    NotUnivariate,
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl From<PolyError> for RealAlgError {
    fn from(e: PolyError) -> Self {
        RealAlgError::Formula(FormulaError::Poly(e))
    }
}

/// Dense univariate polynomial; `coeffs[i]` multiplies x^i, no trailing
/// zeros, the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl std::fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Conversion from the sparse type; every variable other than `var` is
    /// rejected.
    pub fn from_poly(p: &Polynomial, var: &str) -> Result<Self, RealAlgError> {
        let mut coeffs = vec![BigInt::zero(); p.degree_in(var) + 1];
        for (m, c) in p.terms() {
            let mut e = 0;
            for (v, k) in m.iter() {
                if v == var {
                    e = k as usize;
                } else {
                    return Err(RealAlgError::NotUnivariate);
                }
            }
            coeffs[e] += c;
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_poly(&self, var: &str) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &Polynomial::term(c.clone(), var, i as u32);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; 0 for constants including the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> UniPoly {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.derivative();
        }
        cur
    }

    pub fn scale(&self, c: &BigInt) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        UniPoly::new(out)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    fn mul_xk(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: out }
    }

    /// Exact value at a rational point.
    pub fn eval(&self, xi: &Rational) -> Rational {
        let mut acc = Rational::from(BigInt::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * xi + Rational::from(c.clone());
        }
        acc
    }

    /// Sign at a rational point, via integer arithmetic on the homogenized
    /// form: sgn f(n/d) = sgn Σ aᵢ nⁱ d^(deg−i) for d > 0.
    pub fn sign_at(&self, xi: &Rational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let n = xi.numer();
        let d = xi.denom();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner from the top: acc = acc·n + aᵢ·d^(deg−i)
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * n + c * &dpow;
            if i > 0 {
                dpow *= d;
            }
        }
        sign_of(&acc)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// Content removed, sign of the leading coefficient preserved.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let c = self.content();
        UniPoly { coeffs: self.coeffs.iter().map(|x| x / &c).collect() }
    }

    /// Pseudo-remainder: repeatedly scales by the leading coefficient of
    /// `g` to keep arithmetic integral. Returns the remainder together
    /// with the sign of the accumulated multiplier, which callers need to
    /// preserve Sturm sign structure.
    fn pseudo_rem(&self, g: &UniPoly) -> (UniPoly, i8) {
        assert!(!g.is_zero());
        if g.is_constant() {
            return (UniPoly::zero(), 1);
        }
        let dg = g.degree();
        let lc = g.leading();
        let lc_sign = sign_of(lc);
        let mut r = self.clone();
        let mut mult_sign = 1i8;
        while !r.is_zero() && r.degree() >= dg {
            let shift = r.degree() - dg;
            let rl = r.leading().clone();
            r = r.scale(lc).sub(&g.mul_xk(shift).scale(&rl));
            mult_sign *= lc_sign;
        }
        (r, mult_sign)
    }

    /// Exact division in Z[x]; panics if `d` does not divide exactly.
    fn div_exact(&self, d: &UniPoly) -> UniPoly {
        assert!(!d.is_zero());
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len()];
        let dd = d.degree();
        let lc = d.leading();
        while !r.is_zero() && r.degree() >= dd && !(r.is_constant() && dd > 0) {
            let shift = r.degree() - dd;
            let (c, rem) = r.leading().div_rem(lc);
            assert!(rem.is_zero(), "non-exact division");
            q[shift] = c.clone();
            let step = UniPoly::new(vec![c]).mul_xk(shift);
            r = r.sub(&d.mul(&step));
        }
        assert!(r.is_zero(), "non-exact division");
        UniPoly::new(q)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        if a.is_zero() {
            return UniPoly::zero();
        }
        if a.leading().is_negative() {
            a = a.neg();
        }
        a.primitive()
    }

    /// Squarefree part: self / gcd(self, self′), primitive. Same distinct
    /// roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        assert!(!self.is_zero());
        if self.is_constant() {
            return UniPoly::new(vec![BigInt::one()]);
        }
        let g = self.primitive().gcd(&self.derivative());
        let mut sq = self.primitive().div_exact(&g).primitive();
        if sq.leading().is_negative() {
            sq = sq.neg();
        }
        sq
    }

    /// 1 + max |aᵢ| / |a_deg|: every real root lies strictly inside
    /// (−B−1, B+1) for B this bound.
    pub fn cauchy_bound(&self) -> Rational {
        assert!(!self.is_zero() && !self.is_constant());
        let lead = self.leading().abs();
        let mut max = Rational::from(BigInt::zero());
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = Rational::new(c.abs(), lead.clone());
            if q > max {
                max = q;
            }
        }
        max + Rational::from(BigInt::one())
    }

    /// Canonical Sturm chain: f, f′, then negated pseudo-remainders with
    /// the multiplier sign folded back in so each element is a positive
    /// multiple of the rational-arithmetic chain element.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        assert!(!self.is_zero());
        let mut chain = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let prev = &chain[chain.len() - 2];
            let last = &chain[chain.len() - 1];
            let (r, msign) = prev.pseudo_rem(last);
            if r.is_zero() {
                return chain;
            }
            let p = r.primitive();
            chain.push(if msign > 0 { p.neg() } else { p });
        }
    }
}

/// Sign variation count of a chain at a rational point (zeros skipped).
fn variations(chain: &[UniPoly], t: &Rational) -> usize {
    let mut prev = 0i8;
    let mut count = 0;
    for p in chain {
        let s = p.sign_at(t);
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Distinct roots of the chain's head polynomial in the open interval
/// (lo, hi); both endpoints must be non-roots.
fn count_roots(chain: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    debug_assert!(chain[0].sign_at(lo) != 0 && chain[0].sign_at(hi) != 0);
    let vl = variations(chain, lo);
    let vh = variations(chain, hi);
    debug_assert!(vl >= vh);
    vl - vh
}

/// Open interval with exactly one root of `f` inside and non-root
/// endpoints.
#[derive(Clone, Debug)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub f: UniPoly,
}

/// A real algebraic number: an isolating interval for a root of `f`
/// together with the squarefree part of `f`, on which the root is simple.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    pub interval: IsolatingInterval,
    pub sqfree: UniPoly,
}

impl AlgebraicNumber {
    pub fn lo(&self) -> &Rational {
        &self.interval.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.interval.hi
    }

    pub fn width(&self) -> Rational {
        &self.interval.hi - &self.interval.lo
    }

    /// The root itself when it is rational (the squarefree part is
    /// linear); None otherwise, even for rational roots of higher-degree
    /// irreducible-over-the-interval factors we cannot see cheaply.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.sqfree.degree() == 1 {
            let b = self.sqfree.coeff(0);
            let a = self.sqfree.coeff(1);
            return Some(Rational::new(-b, a));
        }
        None
    }

    /// One bisection step. If the midpoint happens to be the root, the
    /// interval shrinks symmetrically around it instead.
    pub fn refine(&mut self) {
        let two = Rational::from(BigInt::from(2));
        let mid = (self.lo() + self.hi()) / &two;
        match self.sqfree.sign_at(&mid) {
            0 => {
                let lo = (self.lo() + &mid) / &two;
                let hi = (self.hi() + &mid) / &two;
                self.interval.lo = lo;
                self.interval.hi = hi;
            }
            s => {
                if s == self.sqfree.sign_at(self.lo()) {
                    self.interval.lo = mid;
                } else {
                    self.interval.hi = mid;
                }
            }
        }
    }

    pub fn refine_below(&mut self, eps: &Rational) {
        while &self.width() >= eps {
            self.refine();
        }
    }

    /// Sign of `self` − t for a rational t: compares an algebraic number
    /// against a rational point exactly.
    pub fn cmp_rational(&self, t: &Rational) -> Ordering {
        if self.sqfree.sign_at(t) == 0 {
            // t is a root of sqfree; it equals self iff it lies inside the
            // isolating interval.
            if self.lo() < t && t < self.hi() {
                return Ordering::Equal;
            }
            return if t <= self.lo() { Ordering::Greater } else { Ordering::Less };
        }
        let mut me = self.clone();
        loop {
            if me.hi() <= t {
                return Ordering::Less;
            }
            if t <= me.lo() {
                return Ordering::Greater;
            }
            me.refine();
        }
    }
}

/// Total order on algebraic numbers; refines clones as needed.
pub fn cmp_algebraic(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    if a.hi() <= b.lo() {
        return Ordering::Less;
    }
    if b.hi() <= a.lo() {
        return Ordering::Greater;
    }
    // Overlapping intervals. Equal iff a's root is a root of b.sqfree that
    // lies inside b's isolating interval.
    if sign_at_algebraic(&b.sqfree, a) == 0 {
        let mut ax = a.clone();
        loop {
            if b.lo() < ax.lo() && ax.hi() < b.hi() {
                return Ordering::Equal;
            }
            if ax.hi() <= b.lo() {
                return Ordering::Less;
            }
            if b.hi() <= ax.lo() {
                return Ordering::Greater;
            }
            ax.refine();
        }
    }
    let mut ax = a.clone();
    let mut bx = b.clone();
    loop {
        if ax.hi() <= bx.lo() {
            return Ordering::Less;
        }
        if bx.hi() <= ax.lo() {
            return Ordering::Greater;
        }
        ax.refine();
        bx.refine();
    }
}

/// All real roots of `f`, ascending, as algebraic numbers.
pub fn isolate_roots(f: &UniPoly) -> Result<Vec<AlgebraicNumber>, RealAlgError> {
    if f.is_zero() {
        return Err(RealAlgError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let sq = f.squarefree_part();
    if sq.is_constant() {
        return Ok(Vec::new());
    }
    let chain = sq.sturm_chain();
    let bound = sq.cauchy_bound() + Rational::from(BigInt::one());
    let lo = -bound.clone();
    let hi = bound;
    let mut out = Vec::new();
    isolate_rec(f, &sq, &chain, lo, hi, &mut out);
    Ok(out)
}

fn isolate_rec(
    f: &UniPoly,
    sq: &UniPoly,
    chain: &[UniPoly],
    lo: Rational,
    hi: Rational,
    out: &mut Vec<AlgebraicNumber>,
) {
    let n = count_roots(chain, &lo, &hi);
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(AlgebraicNumber {
            interval: IsolatingInterval { lo, hi, f: f.clone() },
            sqfree: sq.clone(),
        });
        return;
    }
    let two = Rational::from(BigInt::from(2));
    let mid = (&lo + &hi) / &two;
    if sq.sign_at(&mid) == 0 {
        // The split point is itself a root; carve a private interval for
        // it and recurse on both sides.
        let four = Rational::from(BigInt::from(4));
        let mut delta = (&hi - &lo) / &four;
        loop {
            let l = &mid - &delta;
            let h = &mid + &delta;
            if sq.sign_at(&l) != 0 && sq.sign_at(&h) != 0 && count_roots(chain, &l, &h) == 1 {
                isolate_rec(f, sq, chain, lo, l.clone(), out);
                out.push(AlgebraicNumber {
                    interval: IsolatingInterval { lo: l, hi: h.clone(), f: f.clone() },
                    sqfree: sq.clone(),
                });
                isolate_rec(f, sq, chain, h, hi, out);
                return;
            }
            delta /= &two;
        }
    }
    isolate_rec(f, sq, chain, lo, mid.clone(), out);
    isolate_rec(f, sq, chain, mid, hi, out);
}

/// Sign of `g` at the algebraic point, refining a scratch copy of the
/// interval as needed.
pub fn sign_at_algebraic(g: &UniPoly, xi: &AlgebraicNumber) -> i8 {
    let mut scratch = xi.clone();
    sign_at_refining(g, &mut scratch)
}

/// Same as [`sign_at_algebraic`] but keeps the refinement work in the
/// caller's copy, which matters inside memoized loops.
pub fn sign_at_refining(g: &UniPoly, xi: &mut AlgebraicNumber) -> i8 {
    if g.is_zero() {
        return 0;
    }
    if g.is_constant() {
        return sign_of(g.leading());
    }
    if let Some(r) = xi.as_rational() {
        return g.sign_at(&r);
    }
    // Zero iff the root is shared: gcd(sqfree, g) has a root in the
    // isolating interval. Roots of the gcd inside the interval can only
    // be xi itself, because they are roots of sqfree too.
    let h = xi.sqfree.gcd(g);
    if !h.is_constant() {
        let chain = h.sturm_chain();
        if count_roots(&chain, xi.lo(), xi.hi()) > 0 {
            return 0;
        }
    }
    // Not a root of g: shrink the interval until g cannot change sign
    // inside, then read the sign anywhere in it.
    let gs = g.squarefree_part();
    let chain = gs.sturm_chain();
    loop {
        if gs.sign_at(xi.lo()) != 0
            && gs.sign_at(xi.hi()) != 0
            && count_roots(&chain, xi.lo(), xi.hi()) == 0
        {
            let two = Rational::from(BigInt::from(2));
            let mid = (xi.lo() + xi.hi()) / &two;
            let s = g.sign_at(&mid);
            debug_assert!(s != 0);
            return s;
        }
        xi.refine();
    }
}

/// Signs of f′, f″, …, f^(n) at the point, in that order. Derivatives
/// beyond deg f are identically zero and contribute sign 0.
pub fn derivative_signs_at(f: &UniPoly, xi: &AlgebraicNumber, n: usize) -> Vec<i8> {
    let mut scratch = xi.clone();
    let mut out = Vec::with_capacity(n);
    let mut d = f.clone();
    for _ in 0..n {
        d = d.derivative();
        out.push(sign_at_refining(&d, &mut scratch));
    }
    out
}

/// Thom code of length n at a root of f: the signs of the first n
/// derivatives. n may exceed deg f; vanished derivatives pad with 0.
pub fn thom_code_at(f: &UniPoly, xi: &AlgebraicNumber, n: usize) -> Result<Vec<i8>, RealAlgError> {
    if sign_at_algebraic(f, xi) != 0 {
        return Err(RealAlgError::NotARoot);
    }
    Ok(derivative_signs_at(f, xi, n))
}

/// The root of `f` whose derivative signs match `s`, if any. For
/// |s| ≥ deg f the match is unique.
pub fn find_root_by_code(f: &UniPoly, s: &[i8]) -> Result<Option<AlgebraicNumber>, RealAlgError> {
    for root in isolate_roots(f)? {
        if derivative_signs_at(f, &root, s.len()) == s {
            return Ok(Some(root));
        }
    }
    Ok(None)
}

/// Decision procedure for ∃ var φ with every other variable fixed to a
/// rational. φ must be positive and quantifier-free. Exact: instantiates
/// all atoms, collects every root of every instantiated polynomial, and
/// tests φ at the roots, between consecutive roots, and beyond the
/// extremes.
pub fn decide_exists_1d(
    phi: &Formula,
    var: &str,
    alpha: &BTreeMap<String, Rational>,
) -> Result<bool, RealAlgError> {
    let atom_list = formula::atoms(phi)?;
    let mut nums = Vec::with_capacity(atom_list.len());
    for a in &atom_list {
        let rp = a.poly.eval_params(var, alpha)?;
        nums.push(UniPoly::from_poly(&rp.num, var)?);
    }
    let index: BTreeMap<&Atom, usize> =
        atom_list.iter().enumerate().map(|(i, a)| (a, i)).collect();

    let mut roots: Vec<AlgebraicNumber> = Vec::new();
    let mut bound = Rational::from(BigInt::zero());
    for u in &nums {
        if u.is_zero() || u.is_constant() {
            continue;
        }
        let b = u.cauchy_bound();
        if b > bound {
            bound = b;
        }
        roots.extend(isolate_roots(u)?);
    }
    roots.sort_by(cmp_algebraic);
    roots.dedup_by(|a, b| cmp_algebraic(a, b) == Ordering::Equal);
    // Refine to pairwise disjoint intervals so gap midpoints are honest
    // sample points strictly between consecutive roots.
    for i in 1..roots.len() {
        loop {
            let (left, right) = roots.split_at_mut(i);
            let a = &mut left[i - 1];
            let b = &mut right[0];
            if a.hi() <= b.lo() {
                break;
            }
            a.refine();
            b.refine();
        }
    }

    let truth_at_signs = |signs: &[i8]| -> bool {
        fn eval(f: &Formula, index: &BTreeMap<&Atom, usize>, signs: &[i8]) -> bool {
            match f {
                Formula::True => true,
                Formula::False => false,
                Formula::Atom(a) => a.rel.holds_for_sign(signs[index[a]]),
                Formula::And(cs) => cs.iter().all(|c| eval(c, index, signs)),
                Formula::Or(cs) => cs.iter().any(|c| eval(c, index, signs)),
                _ => unreachable!("positive quantifier-free input"),
            }
        }
        eval(phi, &index, signs)
    };

    let beyond = bound + Rational::from(BigInt::one());
    let mut rational_points = vec![-beyond.clone()];
    for pair in roots.windows(2) {
        let mid = (pair[0].hi() + pair[1].lo()) / Rational::from(BigInt::from(2));
        rational_points.push(mid);
    }
    rational_points.push(beyond);

    for t in &rational_points {
        let signs: Vec<i8> = nums.iter().map(|u| u.sign_at(t)).collect();
        if truth_at_signs(&signs) {
            return Ok(true);
        }
    }
    for root in &mut roots {
        let signs: Vec<i8> = nums
            .iter()
            .map(|u| sign_at_refining(u, root))
            .collect();
        if truth_at_signs(&signs) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64(coeffs)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    // x² − 3x + 2 = (x−1)(x−2)
    fn two_roots() -> UniPoly {
        up(&[2, -3, 1])
    }

    #[test]
    fn sign_at_rational_points() {
        let f = two_roots();
        assert_eq!(f.sign_at(&rat(0, 1)), 1);
        assert_eq!(f.sign_at(&rat(3, 2)), -1);
        assert_eq!(f.sign_at(&rat(1, 1)), 0);
        assert_eq!(f.sign_at(&rat(7, 2)), 1);
        assert_eq!(f.eval(&rat(3, 2)), rat(-1, 4));
    }

    #[test]
    fn sturm_chain_counts_roots() {
        let f = two_roots();
        let chain = f.sturm_chain();
        assert_eq!(count_roots(&chain, &rat(0, 1), &rat(3, 1)), 2);
        assert_eq!(count_roots(&chain, &rat(0, 1), &rat(3, 2)), 1);
        assert_eq!(count_roots(&chain, &rat(5, 1), &rat(9, 1)), 0);
        // Multiple roots are counted once: (x−1)².
        let g = up(&[1, -2, 1]);
        let chain = g.sturm_chain();
        assert_eq!(count_roots(&chain, &rat(0, 1), &rat(2, 1)), 1);
    }

    #[test]
    fn isolate_simple_quadratic() {
        let roots = isolate_roots(&two_roots()).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].cmp_rational(&rat(1, 1)), Ordering::Equal);
        assert_eq!(roots[1].cmp_rational(&rat(2, 1)), Ordering::Equal);
        assert!(roots[0].lo() < roots[0].hi());
    }

    #[test]
    fn isolate_edge_cases() {
        assert!(isolate_roots(&UniPoly::zero()).is_err());
        assert_eq!(isolate_roots(&up(&[7])).unwrap().len(), 0);
        assert_eq!(isolate_roots(&up(&[1, 0, 1])).unwrap().len(), 0); // x²+1
        assert_eq!(isolate_roots(&up(&[1, -2, 1])).unwrap().len(), 1); // (x−1)²
        // x³ − 2x = x(x−√2)(x+√2)
        let roots = isolate_roots(&up(&[0, -2, 0, 1])).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[1].cmp_rational(&rat(0, 1)), Ordering::Equal);
        assert_eq!(roots[0].cmp_rational(&rat(-1, 1)), Ordering::Less);
        assert_eq!(roots[2].cmp_rational(&rat(1, 1)), Ordering::Greater);
    }

    #[test]
    fn isolate_dense_cluster() {
        // (x−1)(x−2)(x−3)(x−4) with a root at the midpoint of the first
        // bisections.
        let f = up(&[24, -50, 35, -10, 1]);
        let roots = isolate_roots(&f).unwrap();
        assert_eq!(roots.len(), 4);
        for (i, r) in [1i64, 2, 3, 4].into_iter().enumerate() {
            assert_eq!(roots[i].cmp_rational(&rat(r, 1)), Ordering::Equal);
        }
    }

    #[test]
    fn sign_at_algebraic_points() {
        let f = two_roots();
        let roots = isolate_roots(&f).unwrap();
        let root1 = &roots[0];
        // 2x − 3 is negative at 1.
        assert_eq!(sign_at_algebraic(&up(&[-3, 2]), root1), -1);
        // f itself vanishes there.
        assert_eq!(sign_at_algebraic(&f, root1), 0);
        // x − 1 vanishes: shared-root detection through the gcd.
        assert_eq!(sign_at_algebraic(&up(&[-1, 1]), root1), 0);
        // At √2: x² − 2 vanishes, x − 1 is positive, x − 2 negative.
        let sqrt2 = &isolate_roots(&up(&[-2, 0, 1])).unwrap()[1];
        assert_eq!(sign_at_algebraic(&up(&[-2, 0, 1]), sqrt2), 0);
        assert_eq!(sign_at_algebraic(&up(&[-1, 1]), sqrt2), 1);
        assert_eq!(sign_at_algebraic(&up(&[-2, 1]), sqrt2), -1);
    }

    #[test]
    fn compare_algebraic_numbers() {
        // √2 from x²−2 and √2 from x⁴−4 must compare equal.
        let a = isolate_roots(&up(&[-2, 0, 1])).unwrap().pop().unwrap();
        let b = isolate_roots(&up(&[-4, 0, 0, 0, 1])).unwrap().pop().unwrap();
        assert_eq!(cmp_algebraic(&a, &b), Ordering::Equal);
        // √2 < 3/2 < φ-ish root? use √3 instead.
        let c = isolate_roots(&up(&[-3, 0, 1])).unwrap().pop().unwrap();
        assert_eq!(cmp_algebraic(&a, &c), Ordering::Less);
        assert_eq!(cmp_algebraic(&c, &a), Ordering::Greater);
        assert_eq!(a.cmp_rational(&rat(3, 2)), Ordering::Less);
        assert_eq!(a.cmp_rational(&rat(7, 5)), Ordering::Greater);
    }

    #[test]
    fn thom_codes_at_roots() {
        // x² − 3x + 2: root 1 has code (−1, 1), root 2 has (1, 1).
        let f = two_roots();
        let roots = isolate_roots(&f).unwrap();
        assert_eq!(thom_code_at(&f, &roots[0], 2).unwrap(), vec![-1, 1]);
        assert_eq!(thom_code_at(&f, &roots[1], 2).unwrap(), vec![1, 1]);
        // Padding beyond the degree appends zeros.
        assert_eq!(thom_code_at(&f, &roots[0], 4).unwrap(), vec![-1, 1, 0, 0]);
        // Not a root.
        let sqrt2 = isolate_roots(&up(&[-2, 0, 1])).unwrap().pop().unwrap();
        assert_eq!(thom_code_at(&f, &sqrt2, 2), Err(RealAlgError::NotARoot));
    }

    #[test]
    fn find_root_by_code_works() {
        let f = two_roots();
        let r = find_root_by_code(&f, &[-1, 1]).unwrap().unwrap();
        assert_eq!(r.cmp_rational(&rat(1, 1)), Ordering::Equal);
        let r = find_root_by_code(&f, &[1, 1]).unwrap().unwrap();
        assert_eq!(r.cmp_rational(&rat(2, 1)), Ordering::Equal);
        assert!(find_root_by_code(&f, &[0, 1]).unwrap().is_none());
        // Double root of (x−1)²: code (0, 1).
        let g = up(&[1, -2, 1]);
        let r = find_root_by_code(&g, &[0, 1]).unwrap().unwrap();
        assert_eq!(r.cmp_rational(&rat(1, 1)), Ordering::Equal);
    }

    #[test]
    fn decide_exists_basic() {
        let alpha = BTreeMap::new();
        let cases = [
            ("(< (^ x 2) 0)", false),
            ("(<= (^ x 2) 0)", true),
            ("(and (<= (+ (^ x 2) (* -3 x) 2) 0) (> (+ x -1) 0))", true),
            ("(and (< (+ (^ x 2) (* -3 x) 2) 0) (< (+ x -1) 0))", false),
            ("(or (< 1 0) (= (+ (^ x 2) -2) 0))", true),
            ("(> 1 0)", true),
            ("(> -1 0)", false),
        ];
        for (src, expect) in cases {
            let phi = parse_formula(src).unwrap();
            assert_eq!(
                decide_exists_1d(&phi, "x", &alpha).unwrap(),
                expect,
                "{src}"
            );
        }
    }

    #[test]
    fn decide_exists_parametric_instantiation() {
        // a·x + b = 0 at a=0: solvable iff b = 0.
        let phi = parse_formula("(= (+ (* a x) b) 0)").unwrap();
        let mut alpha = BTreeMap::new();
        alpha.insert("a".to_string(), rat(0, 1));
        alpha.insert("b".to_string(), rat(1, 1));
        assert!(!decide_exists_1d(&phi, "x", &alpha).unwrap());
        alpha.insert("b".to_string(), rat(0, 1));
        assert!(decide_exists_1d(&phi, "x", &alpha).unwrap());
        alpha.insert("a".to_string(), rat(2, 3));
        alpha.insert("b".to_string(), rat(5, 7));
        assert!(decide_exists_1d(&phi, "x", &alpha).unwrap());
        // Missing parameter errors.
        let empty = BTreeMap::new();
        assert!(decide_exists_1d(&phi, "x", &empty).is_err());
    }

    #[test]
    fn decide_exists_needs_strict_interior_points() {
        // Satisfied only on the open interval (1, 2): neither at roots nor
        // beyond the extremes.
        let phi = parse_formula("(< (+ (^ x 2) (* -3 x) 2) 0)").unwrap();
        assert!(decide_exists_1d(&phi, "x", &BTreeMap::new()).unwrap());
        // Satisfied only at the double root x = 1.
        let phi = parse_formula("(<= (+ (^ x 2) (* -2 x) 1) 0)").unwrap();
        assert!(decide_exists_1d(&phi, "x", &BTreeMap::new()).unwrap());
        let phi = parse_formula("(< (+ (^ x 2) (* -2 x) 1) 0)").unwrap();
        assert!(!decide_exists_1d(&phi, "x", &BTreeMap::new()).unwrap());
    }

    #[test]
    fn squarefree_and_gcd() {
        // (x−1)²(x+2) → squarefree (x−1)(x+2)
        let f = up(&[1, -2, 1]).mul(&up(&[2, 1]));
        let sq = f.squarefree_part();
        assert_eq!(sq, up(&[-1, 1]).mul(&up(&[2, 1])).primitive());
        let g = up(&[-1, 1]).mul(&up(&[-2, 1])); // (x−1)(x−2)
        let h = up(&[-1, 1]).mul(&up(&[3, 1])); // (x−1)(x+3)
        assert_eq!(g.gcd(&h), up(&[-1, 1]));
        // Coprime gcd is constant.
        assert!(up(&[-2, 1]).gcd(&up(&[3, 1])).is_constant());
    }
}
