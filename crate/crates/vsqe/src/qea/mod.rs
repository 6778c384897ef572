//! Answering root queries: given a parametric root (p, s) and possibly a
//! second polynomial q, produce a quantifier-free formula over the
//! coefficients equivalent to
//!
//!  * guard — "p has a root with derivative signs s",
//!  * subst — "q ρ 0 holds at that root",
//!  * nu — "that root is also a root of q, with derivative signs t".
//!
//! Three backends, tried in a configurable order:
//!
//!  * tables — precomputed answers per degree, instantiated by
//!    substituting the concrete coefficient polynomials for u0..un/v0..vn;
//!  * pointfree — when every coefficient is an integer constant, decide
//!    the query directly against the actual roots (memoized);
//!  * bridge — hand the defining sentence to an external eliminator and
//!    instantiate whatever it returns.

pub mod author;
pub mod bridge;
pub mod pointfree;
pub mod tables;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{self, Atom, Formula, FormulaError, Relation};
use crate::poly::Polynomial;
use crate::realalg::{self, RealAlgError};
use crate::thom::{self, SignSequence, ThomError};

pub use author::build_table;
pub use bridge::Bridge;
pub use pointfree::PointfreeEngine;
pub use tables::{load_dir, load_file, parse_tables_str, EntryKey, TableError, TableSet};

#[derive(Debug, Error)]
pub enum QeError {
    #[error("no table entries exist for degree {0}")]
    UnsupportedDegree(usize),
    #[error("missing coefficient: {0}")]
    MissingCoefficient(String),
    #[error("no configured backend can answer: {0}")]
    NoBackendApplicable(String),
    #[error("bridge failure: {0}")]
    BridgeFailure(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Thom(#[from] ThomError),
    #[error(transparent)]
    RealAlg(#[from] RealAlgError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// What is being asked about the parametric root (p, s).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Guard { s: SignSequence },
    Subst { s: SignSequence, rel: Relation },
    Nu { s: SignSequence, t: SignSequence },
}

impl QueryKind {
    pub fn key(&self) -> EntryKey {
        match self {
            QueryKind::Guard { s } => EntryKey::Guard(s.clone()),
            QueryKind::Subst { s, rel } => EntryKey::Subst(s.clone(), *rel),
            QueryKind::Nu { s, t } => EntryKey::Nu(s.clone(), t.clone()),
        }
    }

    pub fn uses_q(&self) -> bool {
        !matches!(self, QueryKind::Guard { .. })
    }
}

/// A query at a fixed framework degree. The generic form is over the
/// coefficient parameters u0..un (and v0..vn when q participates), with
/// the root variable `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QeQuery {
    pub degree: usize,
    pub kind: QueryKind,
}

pub const ROOT_VAR: &str = "x";

impl QeQuery {
    pub fn new(degree: usize, kind: QueryKind) -> Self {
        QeQuery { degree, kind }
    }

    /// The quantifier-free matrix of the defining sentence, over the
    /// generic coefficients and the root variable.
    pub fn body(&self) -> Formula {
        let p = thom::generic_poly("u", ROOT_VAR, self.degree);
        let (s, extra) = match &self.kind {
            QueryKind::Guard { s } => (s, Vec::new()),
            QueryKind::Subst { s, rel } => {
                let q = thom::generic_poly("v", ROOT_VAR, self.degree);
                (s, vec![Formula::atom(q, *rel)])
            }
            QueryKind::Nu { s, t } => {
                let q = thom::generic_poly("v", ROOT_VAR, self.degree);
                (s, thom::root_conditions(&q, ROOT_VAR, t))
            }
        };
        let mut conj = thom::root_conditions(&p, ROOT_VAR, s);
        conj.extend(extra);
        Formula::and_of(conj)
    }

    /// The defining sentence: ∃x(p = 0 ∧ derivative signs ∧ …).
    pub fn payload(&self) -> Formula {
        Formula::Exists(ROOT_VAR.to_string(), Box::new(self.body()))
    }
}

/// Substitute concrete coefficient polynomials for the generic parameters
/// of a table (or bridge) answer and fold any decided atoms. `p_coeffs`
/// and `q_coeffs` are indexed by power: entry i replaces uᵢ/vᵢ.
pub fn instantiate(
    template: &Formula,
    p_coeffs: &[Polynomial],
    q_coeffs: Option<&[Polynomial]>,
) -> Result<Formula, QeError> {
    let mut map: BTreeMap<String, Polynomial> = BTreeMap::new();
    for (i, c) in p_coeffs.iter().enumerate() {
        map.insert(format!("u{i}"), c.clone());
    }
    if let Some(qc) = q_coeffs {
        for (i, c) in qc.iter().enumerate() {
            map.insert(format!("v{i}"), c.clone());
        }
    }
    for v in template.variables() {
        if !map.contains_key(&v) {
            return Err(QeError::MissingCoefficient(v.to_string()));
        }
    }
    fn walk(f: &Formula, map: &BTreeMap<String, Polynomial>) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom(a) => {
                Formula::Atom(Atom { poly: a.poly.substitute(map), rel: a.rel })
            }
            Formula::And(cs) => Formula::And(cs.iter().map(|c| walk(c, map)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| walk(c, map)).collect()),
            Formula::Not(g) => Formula::Not(Box::new(walk(g, map))),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(walk(g, map))),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(walk(g, map))),
        }
    }
    Ok(formula::fold_constants(&walk(template, &map)))
}

/// Integer values of coefficient polynomials, if all are constants.
fn const_coeffs(coeffs: &[Polynomial]) -> Option<Vec<BigInt>> {
    coeffs
        .iter()
        .map(|p| {
            if p.is_zero() {
                Some(BigInt::from(0))
            } else {
                p.as_constant().cloned()
            }
        })
        .collect()
}

/// Ground-truth decision of a concrete query straight from the defining
/// sentence, with no memoization and no tables: substitute the integer
/// coefficients into the matrix and run the one-variable decision
/// procedure. Slow but definitionally correct; the memoized engine is
/// pinned against it in tests.
pub fn decide_query_definitional(
    query: &QeQuery,
    p_coeffs: &[BigInt],
    q_coeffs: Option<&[BigInt]>,
) -> Result<bool, QeError> {
    let body = query.body();
    let pc: Vec<Polynomial> =
        p_coeffs.iter().map(|c| Polynomial::constant(c.clone())).collect();
    let qc: Option<Vec<Polynomial>> = q_coeffs
        .map(|qs| qs.iter().map(|c| Polynomial::constant(c.clone())).collect());
    let mut map: BTreeMap<String, Polynomial> = BTreeMap::new();
    for (i, c) in pc.iter().enumerate() {
        map.insert(format!("u{i}"), c.clone());
    }
    if let Some(qc) = &qc {
        for (i, c) in qc.iter().enumerate() {
            map.insert(format!("v{i}"), c.clone());
        }
    }
    fn subst_atoms(f: &Formula, map: &BTreeMap<String, Polynomial>) -> Formula {
        match f {
            Formula::Atom(a) => Formula::Atom(Atom { poly: a.poly.substitute(map), rel: a.rel }),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| subst_atoms(c, map)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| subst_atoms(c, map)).collect()),
            other => other.clone(),
        }
    }
    let concrete = subst_atoms(&body, &map);
    realalg::decide_exists_1d(&concrete, ROOT_VAR, &BTreeMap::new()).map_err(Into::into)
}

/// Backend order entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Tables,
    Pointfree,
    Bridge,
}

/// Query resolver over an ordered backend chain.
pub struct Engine {
    order: Vec<BackendKind>,
    tables: BTreeMap<usize, TableSet>,
    bridge: Option<Bridge>,
    pf: PointfreeEngine,
}

impl Engine {
    pub fn new(order: Vec<BackendKind>) -> Self {
        Engine { order, tables: BTreeMap::new(), bridge: None, pf: PointfreeEngine::new() }
    }

    /// Tables backend preloaded with the built-in degree-1 and degree-2
    /// answers.
    pub fn with_builtin_tables(order: Vec<BackendKind>) -> Self {
        let mut e = Engine::new(order);
        for d in [1, 2] {
            e.add_table(author::build_table(d).expect("built-in degrees"));
        }
        e
    }

    pub fn add_table(&mut self, set: TableSet) {
        self.tables.insert(set.degree, set);
    }

    pub fn set_tables(&mut self, tables: BTreeMap<usize, TableSet>) {
        self.tables = tables;
    }

    pub fn set_bridge(&mut self, bridge: Bridge) {
        self.bridge = Some(bridge);
    }

    pub fn order(&self) -> &[BackendKind] {
        &self.order
    }

    pub fn table(&self, degree: usize) -> Option<&TableSet> {
        self.tables.get(&degree)
    }

    pub fn pointfree(&self) -> &PointfreeEngine {
        &self.pf
    }

    pub fn has_bridge(&self) -> bool {
        self.bridge.is_some()
    }

    /// Can some backend in the chain possibly answer queries at this
    /// degree for these coefficients?
    pub fn can_answer(&self, degree: usize, concrete: bool) -> bool {
        self.order.iter().any(|k| match k {
            BackendKind::Tables => self.tables.contains_key(&degree),
            BackendKind::Pointfree => concrete,
            BackendKind::Bridge => self.bridge.is_some(),
        })
    }

    /// Resolve one query against concrete coefficient polynomials (which
    /// may themselves involve parameters). Returns a quantifier-free
    /// formula over the parameters.
    pub fn resolve(
        &self,
        query: &QeQuery,
        p_coeffs: &[Polynomial],
        q_coeffs: Option<&[Polynomial]>,
    ) -> Result<Formula, QeError> {
        for kind in &self.order {
            match kind {
                BackendKind::Tables => {
                    if let Some(set) = self.tables.get(&query.degree) {
                        if let Some(template) = set.lookup(&query.kind) {
                            return instantiate(template, p_coeffs, q_coeffs);
                        }
                    }
                }
                BackendKind::Pointfree => {
                    let pci = const_coeffs(p_coeffs);
                    let qci = match q_coeffs {
                        Some(qc) => match const_coeffs(qc) {
                            Some(v) => Some(Some(v)),
                            None => None,
                        },
                        None => Some(None),
                    };
                    if let (Some(pci), Some(qci)) = (pci, qci) {
                        let truth = self.pf.decide(query, &pci, qci.as_deref())?;
                        return Ok(Formula::constant(truth));
                    }
                }
                BackendKind::Bridge => {
                    if let Some(b) = &self.bridge {
                        let answer = b.eliminate(&query.payload())?;
                        return instantiate(&answer, p_coeffs, q_coeffs);
                    }
                }
            }
        }
        Err(QeError::NoBackendApplicable(format!(
            "{} at degree {}",
            query.kind.key(),
            query.degree
        )))
    }
}

/// One observed mismatch between a table entry and the direct decision.
#[derive(Clone, Debug)]
pub struct Disagreement {
    pub p_coeffs: Vec<BigInt>,
    pub q_coeffs: Option<Vec<BigInt>>,
    pub table_says: bool,
    pub direct_says: bool,
}

/// Validation outcome for one table entry.
#[derive(Clone, Debug)]
pub struct EntryReport {
    pub key: EntryKey,
    pub samples: usize,
    pub disagreements: Vec<Disagreement>,
}

use crate::sample::fnv1a;

/// Integer polynomial realizing the derivative sign code `s` at the
/// integer root `r`, as a coefficient vector (length s.len() + 1).
fn pattern_realizing(s: &SignSequence, r: i64, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let k = rng.gen_range(1..=3i64);
    match s.len() {
        1 => {
            // b·(x − r) with sign(b) = s₁.
            let b = k * s.get(0) as i64;
            vec![BigInt::from(-b * r), BigInt::from(b)]
        }
        2 => {
            let (s1, s2) = (s.get(0), s.get(1));
            if s2 == 0 {
                // b·(x − r), padded.
                let b = k * s1 as i64;
                vec![BigInt::from(-b * r), BigInt::from(b), BigInt::from(0)]
            } else if s1 == 0 {
                // a·(x − r)² with sign(a) = s₂.
                let a = k * s2 as i64;
                vec![BigInt::from(a * r * r), BigInt::from(-2 * a * r), BigInt::from(a)]
            } else {
                // a·(x − r)(x − r′) with the second root on the side that
                // makes p′(r) carry sign s₁.
                let a = k * s2 as i64;
                let m = rng.gen_range(1..=3i64);
                let r2 = r - (s1 as i64) * (s2 as i64) * m;
                vec![
                    BigInt::from(a * r * r2),
                    BigInt::from(-a * (r + r2)),
                    BigInt::from(a),
                ]
            }
        }
        n => {
            // Unused for the shipped degrees; fall back to a shifted
            // power with the right leading sign.
            let mut v = vec![BigInt::from(0); n + 1];
            v[n] = BigInt::from(k);
            v
        }
    }
}

fn uniform_vec(n: usize, bound: i64, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    (0..=n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()
}

/// k·p with the constant term shifted by c.
fn scaled_plus_constant(p: &[BigInt], k: i64, c: i64) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = p.iter().map(|x| x * k).collect();
    v[0] += c;
    v
}

/// Coefficients of the derivative, padded back to the input length.
fn derivative_vec(p: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = (1..p.len()).map(|j| &p[j] * BigInt::from(j as u64)).collect();
    v.push(BigInt::from(0));
    v
}

/// Random polynomial vector with a prescribed value at the integer point
/// r: all higher coefficients random, the constant term adjusted.
fn vec_with_value_at(n: usize, r: i64, value: i64, bound: i64, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    let mut v = uniform_vec(n, bound, rng);
    let mut acc = BigInt::from(0);
    let rb = BigInt::from(r);
    for i in (1..=n).rev() {
        acc = (acc + &v[i]) * &rb;
    }
    v[0] = BigInt::from(value) - acc;
    v
}

/// Check one table entry against the direct decision procedure on a
/// seeded sample mixture: uniform coefficient vectors plus constructed
/// scenarios (roots realizing the entry's codes, shared roots, prescribed
/// values at the root, degenerate coefficient prefixes, zero q, q
/// proportional to p or to its derivative) that hit the measure-zero
/// cases uniform sampling virtually never reaches.
pub fn validate_entry(
    degree: usize,
    key: &EntryKey,
    template: &Formula,
    samples: usize,
    seed: u64,
    bound: i64,
    pf: &PointfreeEngine,
) -> Result<EntryReport, QeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(&key.to_string()));
    let (query, s_code, t_code): (QeQuery, SignSequence, Option<SignSequence>) = match key {
        EntryKey::Guard(s) => (
            QeQuery::new(degree, QueryKind::Guard { s: s.clone() }),
            s.clone(),
            None,
        ),
        EntryKey::Subst(s, rel) => (
            QeQuery::new(degree, QueryKind::Subst { s: s.clone(), rel: *rel }),
            s.clone(),
            None,
        ),
        EntryKey::Nu(s, t) => (
            QeQuery::new(degree, QueryKind::Nu { s: s.clone(), t: t.clone() }),
            s.clone(),
            Some(t.clone()),
        ),
    };
    let uses_q = query.kind.uses_q();
    let codes = thom::all_candidate_codes(degree);
    let mut disagreements = Vec::new();
    for i in 0..samples {
        let r = rng.gen_range(-3..=3i64);
        let p: Vec<BigInt> = match i % 8 {
            0 | 1 => uniform_vec(degree, bound, &mut rng),
            2 => {
                // A root realizing some random code — often not the
                // entry's own, probing "guard holds for a different code".
                let any = &codes[rng.gen_range(0..codes.len())];
                pattern_realizing(any, r, &mut rng)
            }
            5 => {
                // Degenerate: zero the coefficients from some index up,
                // down to the constant-only and identically-zero cases.
                let mut v = uniform_vec(degree, bound, &mut rng);
                let keep = rng.gen_range(0..=degree);
                for c in v.iter_mut().skip(keep) {
                    *c = BigInt::from(0);
                }
                v
            }
            7 => uniform_vec(degree, 3, &mut rng),
            _ => pattern_realizing(&s_code, r, &mut rng),
        };
        let q: Option<Vec<BigInt>> = if !uses_q {
            None
        } else {
            // Decouple the q scenario from the p scenario so every pairing
            // occurs, in particular the structured q draws below against a
            // p that realizes the entry's own code.
            Some(match rng.gen_range(0..8u32) {
                0 => uniform_vec(degree, bound, &mut rng),
                1 => {
                    // Shared root with a random code for q.
                    let t = t_code
                        .clone()
                        .unwrap_or_else(|| codes[rng.gen_range(0..codes.len())].clone());
                    if rng.gen_bool(0.5) {
                        pattern_realizing(&t, r, &mut rng)
                    } else {
                        let any = &codes[rng.gen_range(0..codes.len())];
                        pattern_realizing(any, r, &mut rng)
                    }
                }
                2 => {
                    // Prescribed small value at the candidate root.
                    let value = rng.gen_range(-2..=2i64);
                    vec_with_value_at(degree, r, value, 3, &mut rng)
                }
                3 => vec![BigInt::from(0); degree + 1],
                4 => vec_with_value_at(degree, r, 0, 3, &mut rng),
                5 => {
                    // Proportional to p with a shifted constant term: sits
                    // exactly on the boundary manifolds where p and q share
                    // roots or where q's value at p's root changes sign.
                    let k = [1, -1, 2, -2][rng.gen_range(0..4usize)];
                    scaled_plus_constant(&p, k, rng.gen_range(-2..=2))
                }
                6 => {
                    // Built from p's derivative: q's signs at the root are
                    // then tied exactly to the root's own sign code.
                    let k = [1, -1, 2, -2][rng.gen_range(0..4usize)];
                    scaled_plus_constant(&derivative_vec(&p), k, rng.gen_range(-2..=2))
                }
                _ => uniform_vec(degree, 3, &mut rng),
            })
        };

        let pc: Vec<Polynomial> =
            p.iter().map(|c| Polynomial::constant(c.clone())).collect();
        let qc: Option<Vec<Polynomial>> =
            q.as_ref().map(|qs| qs.iter().map(|c| Polynomial::constant(c.clone())).collect());
        let table_says = match instantiate(template, &pc, qc.as_deref())? {
            Formula::True => true,
            Formula::False => false,
            other => {
                return Err(QeError::MissingCoefficient(format!(
                    "table answer did not fold to a constant: {}",
                    formula::print_formula(&other)
                )))
            }
        };
        let direct_says = pf.decide(&query, &p, q.as_deref())?;
        if table_says != direct_says {
            disagreements.push(Disagreement {
                p_coeffs: p,
                q_coeffs: q,
                table_says,
                direct_says,
            });
        }
    }
    Ok(EntryReport { key: key.clone(), samples, disagreements })
}

/// Validate every entry of a table set. Deterministic for a fixed seed.
pub fn validate_table(
    set: &TableSet,
    samples: usize,
    seed: u64,
    bound: i64,
) -> Result<Vec<EntryReport>, QeError> {
    let pf = PointfreeEngine::new();
    let mut out = Vec::with_capacity(set.len());
    for (key, template) in set.entries() {
        out.push(validate_entry(set.degree, &key, template, samples, seed, bound, &pf)?);
    }
    Ok(out)
}
