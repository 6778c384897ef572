//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Coefficients stay integral everywhere; rationals enter only at
//! evaluation time, and then always as an integer polynomial over a single
//! shared positive denominator ([`RatPoly`]). Terms live in a `BTreeMap`
//! keyed by monomial, so equality is representational and printing order
//! is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Reduced form with positive denominator is
/// maintained by the representation itself.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient list of length {got} cannot hold degree {degree}")]
    LengthTooSmall { degree: usize, got: usize },
    #[error("variable {0} has no assignment")]
    UnassignedParameter(String),
    #[error("polynomial is not univariate")]
    NotUnivariate,
}

/// Power product, e.g. {x: 2, y: 1} for x²y. Variables with exponent 0 are
/// never stored. The derived order makes term order deterministic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    fn var(name: &str, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert(name.to_string(), exp);
        }
        Monomial(m)
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    fn exponent_of(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    /// The monomial with `var` removed entirely.
    fn without(&self, var: &str) -> Monomial {
        let mut m = self.0.clone();
        m.remove(var);
        Monomial(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }
}

/// Sparse polynomial with `BigInt` coefficients. Zero coefficients are
/// never stored; the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c: BigInt = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn variable(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name, 1), BigInt::one());
        Polynomial { terms }
    }

    /// c · vᵉ as a building block.
    pub fn term(c: impl Into<BigInt>, var: &str, exp: u32) -> Self {
        let c: BigInt = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::var(var, exp), c);
        }
        Polynomial { terms }
    }

    fn insert_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&BigInt> {
        if self.terms.is_empty() {
            // The zero polynomial is the constant 0; callers get None here
            // and must check is_zero first if they care.
            return None;
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        None
    }

    /// True when no variable occurs (constants including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect()
    }

    /// Degree in one variable; 0 for constants and for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> usize {
        self.terms
            .keys()
            .map(|m| m.exponent_of(var) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// k-th derivative with respect to `var`; k = 0 returns self.
    pub fn derive(&self, var: &str, k: usize) -> Polynomial {
        let mut cur = self.clone();
        for _ in 0..k {
            let mut next = Polynomial::zero();
            for (m, c) in &cur.terms {
                let e = m.exponent_of(var);
                if e == 0 {
                    continue;
                }
                let mut m2 = m.without(var);
                if e > 1 {
                    m2 = m2.mul(&Monomial::var(var, e - 1));
                }
                next.insert_term(m2, c * BigInt::from(e));
            }
            cur = next;
        }
        cur
    }

    /// Coefficients with respect to `var`, highest power first, padded with
    /// zero polynomials to exactly `len` entries. `len` must cover the
    /// degree: the result is `[b_{len-1}, …, b_1, b_0]` with
    /// p = Σ bᵢ·varⁱ.
    pub fn coeffs_in(&self, var: &str, len: usize) -> Result<Vec<Polynomial>, PolyError> {
        let deg = self.degree_in(var);
        if len < deg + 1 && !self.is_zero() {
            return Err(PolyError::LengthTooSmall { degree: deg, got: len });
        }
        let mut out = vec![Polynomial::zero(); len];
        for (m, c) in &self.terms {
            let e = m.exponent_of(var) as usize;
            out[len - 1 - e].insert_term(m.without(var), c.clone());
        }
        Ok(out)
    }

    /// Substitute rationals for every variable except `main`. The result is
    /// univariate in `main`, represented exactly as an integer polynomial
    /// over one shared positive denominator.
    pub fn eval_params(
        &self,
        main: &str,
        assignment: &BTreeMap<String, Rational>,
    ) -> Result<RatPoly, PolyError> {
        for v in self.variables() {
            if v != main && !assignment.contains_key(v) {
                return Err(PolyError::UnassignedParameter(v.to_string()));
            }
        }
        // Rational value per power of main, then clear to one denominator.
        let mut by_pow: BTreeMap<u32, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut val = Rational::from(c.clone());
            for (v, e) in m.iter() {
                if v == main {
                    continue;
                }
                let a = &assignment[v];
                for _ in 0..e {
                    val *= a;
                }
            }
            let slot = by_pow
                .entry(m.exponent_of(main))
                .or_insert_with(|| Rational::from(BigInt::zero()));
            *slot += val;
        }
        let mut den = BigInt::one();
        for v in by_pow.values() {
            den = den.lcm(v.denom());
        }
        let mut num = Polynomial::zero();
        for (e, v) in by_pow {
            let c = v.numer() * (&den / v.denom());
            num.insert_term(Monomial::var(main, e), c);
        }
        Ok(RatPoly { num, den })
    }

    /// Exact value at a rational point; the polynomial must be univariate
    /// (or constant).
    pub fn eval_point(&self, xi: &Rational) -> Result<Rational, PolyError> {
        let vars = self.variables();
        if vars.len() > 1 {
            return Err(PolyError::NotUnivariate);
        }
        let mut acc = Rational::from(BigInt::zero());
        for (m, c) in &self.terms {
            let mut val = Rational::from(c.clone());
            for (_, e) in m.iter() {
                for _ in 0..e {
                    val *= xi;
                }
            }
            acc += val;
        }
        Ok(acc)
    }

    /// Exact value with every variable assigned.
    pub fn eval_full(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational, PolyError> {
        for v in self.variables() {
            if !assignment.contains_key(v) {
                return Err(PolyError::UnassignedParameter(v.to_string()));
            }
        }
        let mut acc = Rational::from(BigInt::zero());
        for (m, c) in &self.terms {
            let mut val = Rational::from(c.clone());
            for (v, e) in m.iter() {
                let a = &assignment[v];
                for _ in 0..e {
                    val *= a;
                }
            }
            acc += val;
        }
        Ok(acc)
    }

    /// Simultaneous substitution of polynomials for variables. Variables
    /// absent from the map stay untouched.
    pub fn substitute(&self, map: &BTreeMap<String, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                match map.get(v) {
                    Some(repl) => prod = &prod * &repl.pow(e),
                    None => prod = &prod * &Polynomial::term(1, v, e),
                }
            }
            out = &out + &prod;
        }
        out
    }

    /// Gcd of all coefficients; 1 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// Coefficient of the largest monomial in term order; zero for the zero
    /// polynomial. Used only to pick a deterministic sign normalization.
    pub fn leading_coefficient(&self) -> BigInt {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// self / c for a constant exactly dividing every coefficient.
    pub fn div_exact(&self, c: &BigInt) -> Polynomial {
        assert!(!c.is_zero());
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| {
                let (q, r) = x.div_rem(c);
                assert!(r.is_zero(), "div_exact with non-dividing constant");
                (m.clone(), q)
            })
            .collect();
        Polynomial { terms }
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::formula::print_poly(self))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::formula::print_poly(self))
    }
}

/// Univariate polynomial with rational coefficients in cleared form:
/// value = num / den with den > 0, so signs and roots are those of `num`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    pub num: Polynomial,
    pub den: BigInt,
}

impl RatPoly {
    pub fn eval(&self, xi: &Rational) -> Result<Rational, PolyError> {
        Ok(self.num.eval_point(xi)? / Rational::from(self.den.clone()))
    }
}

/// Sign of a big integer as −1, 0, +1.
pub fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of a rational as −1, 0, +1.
pub fn sign_of_rat(x: &Rational) -> i8 {
    sign_of(x.numer())
}
