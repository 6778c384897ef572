//! Closed-form construction of the degree-1 and degree-2 answer tables.
//!
//! Conventions: p = u2·x² + u1·x + u0 (degree 1 drops u2), q likewise
//! over v-parameters. A sign sequence s prescribes the signs of p′, p″ at
//! the root; σ maps −1/0/+1 to </=/>.
//!
//! Degree 2 splits by the shape of the code:
//!  * (s₁, 0): p″ = 2·u2 vanishes, so u2 = 0 and p is effectively linear
//!    with slope u1 of sign s₁; the root is −u0/u1.
//!  * (0, s₂): p′ vanishes at the root, so it is the double root
//!    −u1/(2·u2) and the discriminant is zero.
//!  * (s₁, s₂), both nonzero: two simple roots exist (negative 4·u2·u0 −
//!    u1²) and s₁ picks the branch: the root is (−u1 + s₁·√Δ)/(2·u2) with
//!    Δ = u1² − 4·u2·u0, because p′ there equals s₁·√Δ.
//!
//! Signs of values of the form A + B·√Δ (Δ > 0 under the guard) translate
//! to polynomial conditions through W = A² − B²·Δ: A + B√Δ = 0 iff
//! A·B ≤ 0 ∧ W = 0, and A + B√Δ > 0 iff (A > 0 ∧ W > 0) ∨
//! (B > 0 ∧ W < 0) ∨ (A ≥ 0 ∧ B > 0).

use num_bigint::BigInt;

use crate::formula::{Formula, Relation};
use crate::poly::Polynomial;
use crate::thom::{all_candidate_codes, sigma, SignSequence};

use super::tables::TableSet;
use super::QeError;

fn uvar(i: usize) -> Polynomial {
    Polynomial::variable(&format!("u{i}"))
}

fn vvar(i: usize) -> Polynomial {
    Polynomial::variable(&format!("v{i}"))
}

/// p scaled by a sign in {−1, +1}.
fn scale_sign(s: i8, p: &Polynomial) -> Polynomial {
    debug_assert!(s == 1 || s == -1);
    if s < 0 {
        -p
    } else {
        p.clone()
    }
}

/// Quantifier-free condition for sign(A + B·√disc) ρ 0, valid wherever
/// disc > 0. Any sign factor must already be folded into `b`.
fn sqrt_sign_cond(a: &Polynomial, b: &Polynomial, disc: &Polynomial, rel: Relation) -> Formula {
    let w = &(a * a) - &(&(b * b) * disc);
    let ab = a * b;
    let atom = Formula::atom;
    match rel {
        Relation::Eq => Formula::and_of([atom(ab, Relation::Le), atom(w, Relation::Eq)]),
        Relation::Ne => Formula::or_of([atom(ab, Relation::Gt), atom(w, Relation::Ne)]),
        Relation::Lt => Formula::or_of([
            Formula::and_of([atom(a.clone(), Relation::Lt), atom(w.clone(), Relation::Gt)]),
            Formula::and_of([atom(b.clone(), Relation::Lt), atom(w, Relation::Lt)]),
            Formula::and_of([atom(a.clone(), Relation::Le), atom(b.clone(), Relation::Lt)]),
        ]),
        Relation::Gt => Formula::or_of([
            Formula::and_of([atom(a.clone(), Relation::Gt), atom(w.clone(), Relation::Gt)]),
            Formula::and_of([atom(b.clone(), Relation::Gt), atom(w, Relation::Lt)]),
            Formula::and_of([atom(a.clone(), Relation::Ge), atom(b.clone(), Relation::Gt)]),
        ]),
        Relation::Le => Formula::or_of([
            sqrt_sign_cond(a, b, disc, Relation::Eq),
            sqrt_sign_cond(a, b, disc, Relation::Lt),
        ]),
        Relation::Ge => Formula::or_of([
            sqrt_sign_cond(a, b, disc, Relation::Eq),
            sqrt_sign_cond(a, b, disc, Relation::Gt),
        ]),
    }
}

/// `sqrt_sign_cond` for a context that already pins sign(b) = b_sign ≠ 0
/// through an adjacent conjunct. The generic case split on b would keep
/// branches that are unsatisfiable under that sign — dead subformulas no
/// sample can ever exercise — so this derives the two-atom equivalents
/// directly: for b > 0, a + b·√Δ is negative iff a < 0 ∧ W > 0, zero iff
/// a ≤ 0 ∧ W = 0, and positive iff W < 0 ∨ a ≥ 0; b < 0 mirrors a ↔ −a.
fn sqrt_sign_cond_known_b(
    a: &Polynomial,
    b: &Polynomial,
    b_sign: i8,
    disc: &Polynomial,
    want: i8,
) -> Formula {
    debug_assert!(b_sign == 1 || b_sign == -1);
    let w = &(a * a) - &(&(b * b) * disc);
    let atom = Formula::atom;
    match (b_sign, want) {
        (1, -1) => Formula::and_of([atom(a.clone(), Relation::Lt), atom(w, Relation::Gt)]),
        (1, 0) => Formula::and_of([atom(a.clone(), Relation::Le), atom(w, Relation::Eq)]),
        (1, _) => Formula::or_of([atom(w, Relation::Lt), atom(a.clone(), Relation::Ge)]),
        (_, -1) => Formula::or_of([atom(w, Relation::Lt), atom(a.clone(), Relation::Le)]),
        (_, 0) => Formula::and_of([atom(a.clone(), Relation::Ge), atom(w, Relation::Eq)]),
        (_, _) => Formula::and_of([atom(a.clone(), Relation::Gt), atom(w, Relation::Gt)]),
    }
}

// ---------------------------------------------------------------- degree 1

/// Existence of a root of u1·x + u0 with p′ = u1 of sign s₁.
fn guard1(s: &SignSequence) -> Formula {
    Formula::atom(uvar(1), sigma(s.get(0)))
}

/// v1·u0 − v0·u1 scaled so its sign equals the sign of q at the root:
/// q(−u0/u1) = (v0·u1 − v1·u0)/u1 and sign(u1) = s₁.
fn q_at_root1(s1: i8) -> Polynomial {
    let num = &(&vvar(0) * &uvar(1)) - &(&vvar(1) * &uvar(0));
    scale_sign(s1, &num)
}

fn subst1(s: &SignSequence, rel: Relation) -> Formula {
    Formula::and_of([guard1(s), Formula::atom(q_at_root1(s.get(0)), rel)])
}

fn nu1(s: &SignSequence, t: &SignSequence) -> Formula {
    let num = &(&vvar(0) * &uvar(1)) - &(&vvar(1) * &uvar(0));
    Formula::and_of([
        guard1(s),
        Formula::atom(num, Relation::Eq),
        Formula::atom(vvar(1), sigma(t.get(0))),
    ])
}

// ---------------------------------------------------------------- degree 2

struct Deg2 {
    a: Polynomial,
    b: Polynomial,
    c: Polynomial,
    d: Polynomial,
    e: Polynomial,
    f: Polynomial,
}

impl Deg2 {
    fn new() -> Self {
        Deg2 { a: uvar(2), b: uvar(1), c: uvar(0), d: vvar(2), e: vvar(1), f: vvar(0) }
    }

    /// 4·u2·u0 − u1², zero exactly on double roots, negative on two
    /// simple roots.
    fn neg_disc(&self) -> Polynomial {
        &(&(&self.a * &self.c) * &Polynomial::constant(BigInt::from(4))) - &(&self.b * &self.b)
    }

    /// u1² − 4·u2·u0, the radicand of the root formula.
    fn disc(&self) -> Polynomial {
        -&self.neg_disc()
    }

    fn guard(&self, s: &SignSequence) -> Formula {
        let (s1, s2) = (s.get(0), s.get(1));
        if s2 == 0 {
            Formula::and_of([
                Formula::atom(self.a.clone(), Relation::Eq),
                Formula::atom(self.b.clone(), sigma(s1)),
            ])
        } else if s1 == 0 {
            Formula::and_of([
                Formula::atom(self.a.clone(), sigma(s2)),
                Formula::atom(self.neg_disc(), Relation::Eq),
            ])
        } else {
            Formula::and_of([
                Formula::atom(self.a.clone(), sigma(s2)),
                Formula::atom(self.neg_disc(), Relation::Lt),
            ])
        }
    }

    /// u1²·q(−u0/u1): sign of q at the root of the effectively linear p.
    fn q_at_linear_root(&self) -> Polynomial {
        let Deg2 { b, c, d, e, f, .. } = self;
        &(&(d * c) * c) - &(&(&(e * b) * c) - &(&(f * b) * b))
    }

    /// 4·u2²·q(−u1/(2·u2)): sign of q at the double root.
    fn q_at_double_root(&self) -> Polynomial {
        let Deg2 { a, b, d, e, f, .. } = self;
        let four = Polynomial::constant(BigInt::from(4));
        let two = Polynomial::constant(BigInt::from(2));
        &(&(&(d * b) * b) - &(&(&(e * a) * b) * &two)) + &(&(&(f * a) * a) * &four)
    }

    /// 2·u2²·q(ξ) = A + B·√Δ at the simple root picked by s₁.
    fn q_at_simple_root(&self, s1: i8) -> (Polynomial, Polynomial) {
        let Deg2 { a, b, c, d, e, f } = self;
        let two = Polynomial::constant(BigInt::from(2));
        // A = v2·u1² − 2·u2·u0·v2 − u2·u1·v1 + 2·u2²·v0
        let aa = &(&(&(d * b) * b) - &(&(&(&(a * c) * d) * &two) + &(&(a * b) * e)))
            + &(&(&(a * a) * f) * &two);
        // B = s₁·(u2·v1 − u1·v2)
        let bb = scale_sign(s1, &(&(a * e) - &(b * d)));
        (aa, bb)
    }

    /// sign of q′(ξ) at the linear root, premultiplied by sign(u1) = s₁:
    /// q′(−u0/u1)·u1 = v1·u1 − 2·v2·u0.
    fn dq_at_linear_root(&self, s1: i8) -> Polynomial {
        let Deg2 { b, c, d, e, .. } = self;
        let two = Polynomial::constant(BigInt::from(2));
        scale_sign(s1, &(&(e * b) - &(&(d * c) * &two)))
    }

    /// sign of q′ at the double root, premultiplied by sign(u2) = s₂:
    /// q′(−u1/(2·u2))·u2 = v1·u2 − v2·u1.
    fn dq_at_double_root(&self, s2: i8) -> Polynomial {
        let Deg2 { a, b, d, e, .. } = self;
        scale_sign(s2, &(&(e * a) - &(d * b)))
    }

    /// u2·q′(ξ) = A′ + B′·√Δ at the simple root picked by s₁.
    fn dq_at_simple_root(&self, s1: i8) -> (Polynomial, Polynomial) {
        let Deg2 { a, b, d, e, .. } = self;
        let aa = &(e * a) - &(d * b);
        let bb = scale_sign(s1, d);
        (aa, bb)
    }

    fn subst(&self, s: &SignSequence, rel: Relation) -> Formula {
        let (s1, s2) = (s.get(0), s.get(1));
        let cond = if s2 == 0 {
            Formula::atom(self.q_at_linear_root(), rel)
        } else if s1 == 0 {
            Formula::atom(self.q_at_double_root(), rel)
        } else {
            let (a, b) = self.q_at_simple_root(s1);
            sqrt_sign_cond(&a, &b, &self.disc(), rel)
        };
        Formula::and_of([self.guard(s), cond])
    }

    fn nu(&self, s: &SignSequence, t: &SignSequence) -> Formula {
        let (s1, s2) = (s.get(0), s.get(1));
        let (t1, t2) = (t.get(0), t.get(1));
        let mut conj = vec![self.guard(s)];
        if s2 == 0 {
            conj.push(Formula::atom(self.q_at_linear_root(), Relation::Eq));
            conj.push(Formula::atom(self.dq_at_linear_root(s1), sigma(t1)));
        } else if s1 == 0 {
            conj.push(Formula::atom(self.q_at_double_root(), Relation::Eq));
            conj.push(Formula::atom(self.dq_at_double_root(s2), sigma(t1)));
        } else {
            let disc = self.disc();
            let (qa, qb) = self.q_at_simple_root(s1);
            conj.push(sqrt_sign_cond(&qa, &qb, &disc, Relation::Eq));
            // sign q′(ξ) = t₁ and u2·q′(ξ) = A′ + B′√Δ, so the required
            // sign of A′ + B′√Δ is t₁·s₂. B′ = s₁·v2, and the trailing
            // conjunct pins sign(v2) = t₂, so the case split on B′ is
            // resolved here rather than emitted.
            let (da, db) = self.dq_at_simple_root(s1);
            if t2 == 0 {
                conj.push(Formula::atom(da, sigma(t1 * s2)));
            } else {
                conj.push(sqrt_sign_cond_known_b(&da, &db, s1 * t2, &disc, t1 * s2));
            }
        }
        conj.push(Formula::atom(self.d.clone(), sigma(t2)));
        Formula::and_of(conj)
    }
}

/// Build the full answer table for a supported degree (1 or 2): one guard
/// per nonzero code, one subst entry per code and relation, one nu entry
/// per pair of codes.
pub fn build_table(degree: usize) -> Result<TableSet, QeError> {
    if degree != 1 && degree != 2 {
        return Err(QeError::UnsupportedDegree(degree));
    }
    let mut set = TableSet::new(degree);
    let codes = all_candidate_codes(degree);
    let d2 = Deg2::new();
    for s in &codes {
        let guard = match degree {
            1 => guard1(s),
            _ => d2.guard(s),
        };
        set.insert_guard(s.clone(), guard).expect("fresh key");
        for rel in Relation::ALL {
            let f = match degree {
                1 => subst1(s, rel),
                _ => d2.subst(s, rel),
            };
            set.insert_subst(s.clone(), rel, f).expect("fresh key");
        }
        for t in &codes {
            let f = match degree {
                1 => nu1(s, t),
                _ => d2.nu(s, t),
            };
            set.insert_nu(s.clone(), t.clone(), f).expect("fresh key");
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, positive_form, print_formula};

    fn seq(s: &[i8]) -> SignSequence {
        SignSequence::from_slice(s)
    }

    #[test]
    fn table_sizes() {
        let t1 = build_table(1).unwrap();
        assert_eq!(t1.degree, 1);
        assert_eq!(t1.len(), 2 + 2 * 6 + 2 * 2);
        let t2 = build_table(2).unwrap();
        assert_eq!(t2.degree, 2);
        assert_eq!(t2.len(), 8 + 8 * 6 + 8 * 8);
        assert!(matches!(build_table(3), Err(QeError::UnsupportedDegree(3))));
    }

    #[test]
    fn degree2_guards_in_closed_form() {
        let t = build_table(2).unwrap();
        let cases: [(&[i8], &str); 8] = [
            (&[-1, -1], "(and (< u2 0) (< (+ (* 4 u0 u2) (* -1 (^ u1 2))) 0))"),
            (&[-1, 0], "(and (= u2 0) (< u1 0))"),
            (&[-1, 1], "(and (> u2 0) (< (+ (* 4 u0 u2) (* -1 (^ u1 2))) 0))"),
            (&[0, -1], "(and (< u2 0) (= (+ (* 4 u0 u2) (* -1 (^ u1 2))) 0))"),
            (&[0, 1], "(and (> u2 0) (= (+ (* 4 u0 u2) (* -1 (^ u1 2))) 0))"),
            (&[1, -1], "(and (< u2 0) (< (+ (* 4 u0 u2) (* -1 (^ u1 2))) 0))"),
            (&[1, 0], "(and (= u2 0) (> u1 0))"),
            (&[1, 1], "(and (> u2 0) (< (+ (* 4 u0 u2) (* -1 (^ u1 2))) 0))"),
        ];
        for (code, want) in cases {
            let got = t.guard(&seq(code)).unwrap();
            let want = parse_formula(want).unwrap();
            assert_eq!(
                positive_form(got).unwrap(),
                positive_form(&want).unwrap(),
                "guard {:?}",
                code
            );
        }
    }

    #[test]
    fn degree1_entries_in_closed_form() {
        let t = build_table(1).unwrap();
        assert_eq!(print_formula(t.guard(&seq(&[1])).unwrap()), "(> u1 0)");
        assert_eq!(print_formula(t.guard(&seq(&[-1])).unwrap()), "(< u1 0)");
        // subst (+1, <): u1 > 0 ∧ u1·v0 − u0·v1 < 0.
        assert_eq!(
            print_formula(t.subst(&seq(&[1]), Relation::Lt).unwrap()),
            "(and (> u1 0) (< (+ (* u1 v0) (- (* u0 v1))) 0))"
        );
        // The sign premultiplier flips for s₁ = −1.
        assert_eq!(
            print_formula(t.subst(&seq(&[-1]), Relation::Lt).unwrap()),
            "(and (< u1 0) (< (+ (- (* u1 v0)) (* u0 v1)) 0))"
        );
        assert_eq!(
            print_formula(t.nu(&seq(&[1]), &seq(&[-1])).unwrap()),
            "(and (> u1 0) (= (+ (* u1 v0) (- (* u0 v1))) 0) (< v1 0))"
        );
    }

    #[test]
    fn known_sign_shortcut_matches_the_generic_case_split() {
        // Instantiate both forms of the sign condition for a + b·√Δ on
        // every integer point with the promised sign of b and Δ > 0 and
        // compare their truth values.
        let (a, b, d) = (
            Polynomial::variable("A"),
            Polynomial::variable("B"),
            Polynomial::variable("D"),
        );
        for want in [-1i8, 0, 1] {
            let generic = sqrt_sign_cond(&a, &b, &d, sigma(want));
            for b_sign in [-1i8, 1] {
                let shortcut = sqrt_sign_cond_known_b(&a, &b, b_sign, &d, want);
                for av in -4i64..=4 {
                    for bv in [-2i64, -1, 1, 2] {
                        if (bv > 0) != (b_sign > 0) {
                            continue;
                        }
                        for dv in [1i64, 2, 4, 9] {
                            let mut map = std::collections::BTreeMap::new();
                            map.insert("A".to_string(), Polynomial::constant(BigInt::from(av)));
                            map.insert("B".to_string(), Polynomial::constant(BigInt::from(bv)));
                            map.insert("D".to_string(), Polynomial::constant(BigInt::from(dv)));
                            let inst = |f: &Formula| -> bool {
                                fn walk(
                                    f: &Formula,
                                    map: &std::collections::BTreeMap<String, Polynomial>,
                                ) -> Formula {
                                    match f {
                                        Formula::Atom(at) => Formula::Atom(crate::formula::Atom {
                                            poly: at.poly.substitute(map),
                                            rel: at.rel,
                                        }),
                                        Formula::And(cs) => Formula::And(
                                            cs.iter().map(|c| walk(c, map)).collect(),
                                        ),
                                        Formula::Or(cs) => Formula::Or(
                                            cs.iter().map(|c| walk(c, map)).collect(),
                                        ),
                                        other => other.clone(),
                                    }
                                }
                                matches!(
                                    crate::formula::fold_constants(&walk(f, &map)),
                                    Formula::True
                                )
                            };
                            assert_eq!(
                                inst(&generic),
                                inst(&shortcut),
                                "want {want} b_sign {b_sign} at A={av} B={bv} D={dv}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn authored_tables_round_trip_through_text() {
        for degree in [1, 2] {
            let t = build_table(degree).unwrap();
            let text = t.to_text();
            let back = super::super::tables::parse_tables(&text, "authored").unwrap();
            assert_eq!(back.len(), t.len());
            assert_eq!(back.to_text(), text);
        }
    }
}
