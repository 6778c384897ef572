//! Deterministic rational sampling and random instance generation.
//!
//! Satisfiability probing, table validation, and the pointwise verifier
//! all draw parameter values the same way: an exhaustive small integer
//! grid first, then seeded random rationals. Keeping the policy in one
//! place makes every consumer reproducible from a single seed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Relation};
use crate::poly::{Polynomial, Rational};

/// Inclusive integer grid scanned before random sampling starts.
pub const GRID_LO: i64 = -5;
pub const GRID_HI: i64 = 5;

/// Magnitude bound for the numerator and denominator of random rational
/// samples drawn after the grid is exhausted.
pub const RANDOM_RATIONAL_BOUND: i64 = 50;

/// Assignments tried per satisfiability probe.
pub const GUARD_SAMPLE_BUDGET: usize = 10_000;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable 64-bit string hash (FNV-1a), used to derive per-item seeds
/// from a run seed plus a textual key.
pub(crate) fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// A random rational with numerator in [−bound, bound] and denominator
/// in [1, bound]. Zero is deliberately reachable: degenerate coefficient
/// drops are the cases most worth exercising.
pub fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Deterministic stream of assignments for a fixed variable list: the
/// full integer grid [GRID_LO, GRID_HI]^k in odometer order, then random
/// rationals from the seeded generator.
pub struct AssignmentStream {
    vars: Vec<String>,
    odometer: Option<Vec<i64>>,
    rng: ChaCha8Rng,
    bound: i64,
}

impl AssignmentStream {
    pub fn new(vars: Vec<String>, seed: u64, bound: i64) -> Self {
        let odometer = if vars.is_empty() { None } else { Some(vec![GRID_LO; vars.len()]) };
        AssignmentStream { vars, odometer, rng: rng_from_seed(seed), bound }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// The next assignment. With no variables this is always the empty
    /// assignment.
    pub fn next_assignment(&mut self) -> BTreeMap<String, Rational> {
        if let Some(digits) = &mut self.odometer {
            let point: BTreeMap<String, Rational> = self
                .vars
                .iter()
                .zip(digits.iter())
                .map(|(v, d)| (v.clone(), Rational::from(BigInt::from(*d))))
                .collect();
            // Advance the odometer; retire it after the last grid point.
            let mut i = digits.len();
            loop {
                if i == 0 {
                    self.odometer = None;
                    break;
                }
                i -= 1;
                if digits[i] < GRID_HI {
                    digits[i] += 1;
                    break;
                }
                digits[i] = GRID_LO;
            }
            return point;
        }
        self.vars
            .iter()
            .map(|v| (v.clone(), random_rational(&mut self.rng, self.bound)))
            .collect()
    }
}

pub fn random_relation(rng: &mut impl Rng) -> Relation {
    Relation::ALL[rng.gen_range(0..Relation::ALL.len())]
}

/// Random integer polynomial in one variable: degree chosen up to
/// `max_degree`, every coefficient in [−bound, bound], leading
/// coefficient nonzero whenever a positive degree was chosen.
pub fn random_univariate(
    rng: &mut impl Rng,
    var: &str,
    max_degree: usize,
    bound: i64,
) -> Polynomial {
    let d = rng.gen_range(0..=max_degree);
    let mut p = Polynomial::zero();
    for i in 0..=d {
        let mut c = rng.gen_range(-bound..=bound);
        if i == d && d > 0 {
            while c == 0 {
                c = rng.gen_range(-bound..=bound);
            }
        }
        if c != 0 {
            p = &p + &Polynomial::term(c, var, i as u32);
        }
    }
    p
}

/// Random positive quantifier-free formula over atoms in one variable:
/// up to `max_atoms` atoms with random relations, combined by a random
/// ∧/∨ tree.
pub fn random_qf(
    rng: &mut impl Rng,
    var: &str,
    max_atoms: usize,
    max_degree: usize,
    bound: i64,
) -> Formula {
    let k = rng.gen_range(1..=max_atoms);
    let atoms: Vec<Formula> = (0..k)
        .map(|_| {
            Formula::atom(random_univariate(rng, var, max_degree, bound), random_relation(rng))
        })
        .collect();
    random_tree(rng, &atoms)
}

fn random_tree(rng: &mut impl Rng, leaves: &[Formula]) -> Formula {
    match leaves.len() {
        0 => Formula::True,
        1 => leaves[0].clone(),
        n => {
            let split = rng.gen_range(1..n);
            let left = random_tree(rng, &leaves[..split]);
            let right = random_tree(rng, &leaves[split..]);
            if rng.gen_bool(0.5) {
                Formula::and_of([left, right])
            } else {
                Formula::or_of([left, right])
            }
        }
    }
}

/// Random polynomial linear in the given parameters (constant term
/// included), coefficients in [−bound, bound].
pub fn random_linear_in(rng: &mut impl Rng, params: &[&str], bound: i64) -> Polynomial {
    let mut p = Polynomial::constant(rng.gen_range(-bound..=bound));
    for name in params {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            p = &p + &Polynomial::term(c, name, 1);
        }
    }
    p
}

/// Random parametric formula in `var` of degree at most 2: up to
/// `max_atoms` atoms whose x-coefficients are linear in the parameters.
/// Degenerate leading coefficients are reachable so the degree-drop
/// rows get exercised.
pub fn random_parametric_quadratic(
    rng: &mut impl Rng,
    var: &str,
    params: &[&str],
    max_atoms: usize,
    bound: i64,
) -> Formula {
    let k = rng.gen_range(1..=max_atoms);
    let atoms: Vec<Formula> = (0..k)
        .map(|_| {
            let mut p = Polynomial::zero();
            for e in 0..=2u32 {
                let coeff = random_linear_in(rng, params, bound);
                p = &p + &(&coeff * &Polynomial::term(1, var, e));
            }
            Formula::atom(p, random_relation(rng))
        })
        .collect();
    random_tree(rng, &atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_comes_first_and_is_exhaustive() {
        let mut s = AssignmentStream::new(vec!["a".into()], 7, 50);
        let mut seen = Vec::new();
        for _ in 0..11 {
            let p = s.next_assignment();
            seen.push(p["a"].clone());
        }
        let expect: Vec<Rational> =
            (GRID_LO..=GRID_HI).map(|i| Rational::from(BigInt::from(i))).collect();
        assert_eq!(seen, expect);
        // After the grid, samples are rationals within the bound.
        let p = s.next_assignment();
        assert!(p["a"].denom() >= &BigInt::from(1));
    }

    #[test]
    fn two_variable_grid_is_a_product() {
        let mut s = AssignmentStream::new(vec!["a".into(), "b".into()], 7, 50);
        let first = s.next_assignment();
        assert_eq!(first["a"], Rational::from(BigInt::from(GRID_LO)));
        assert_eq!(first["b"], Rational::from(BigInt::from(GRID_LO)));
        // The second point advances the least significant digit only.
        let second = s.next_assignment();
        assert_eq!(second["a"], Rational::from(BigInt::from(GRID_LO)));
        assert_eq!(second["b"], Rational::from(BigInt::from(GRID_LO + 1)));
    }

    #[test]
    fn same_seed_same_stream() {
        let mut s1 = AssignmentStream::new(vec!["a".into()], 99, 50);
        let mut s2 = AssignmentStream::new(vec!["a".into()], 99, 50);
        for _ in 0..200 {
            assert_eq!(s1.next_assignment(), s2.next_assignment());
        }
    }

    #[test]
    fn random_polynomials_respect_bounds() {
        use num_traits::Signed;
        let mut rng = rng_from_seed(5);
        for _ in 0..200 {
            let p = random_univariate(&mut rng, "x", 4, 9);
            assert!(p.degree_in("x") <= 4);
            for (_, c) in p.terms() {
                assert!(c.abs() <= BigInt::from(9));
            }
        }
    }

    #[test]
    fn empty_variable_list_yields_empty_assignments() {
        let mut s = AssignmentStream::new(vec![], 1, 50);
        assert!(s.next_assignment().is_empty());
        assert!(s.next_assignment().is_empty());
    }
}
