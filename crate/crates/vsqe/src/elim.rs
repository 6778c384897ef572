//! Quantifier elimination by substitution of finitely many test points.
//!
//! To eliminate ∃x from a positive quantifier-free formula φ, a finite
//! elimination set of candidate values is built from φ's atoms — −∞,
//! parametric roots, and roots nudged right by an infinitesimal — and φ
//! is replaced by the disjunction of its images under each candidate.
//! Two set constructions are offered: the full one (every candidate
//! code für every atom) and a smaller one filtered by which side of a
//! root an atom's relation actually needs. Candidates whose root guard
//! is provably unsatisfiable are dropped; everything else is kept, so
//! the incomplete satisfiability probe can never make the result wrong.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use thiserror::Error;

use crate::formula::{
    atoms as formula_atoms, evaluate, fold_constants, positive_form, Atom, Formula, FormulaError,
    Relation,
};
use crate::poly::{Polynomial, Rational};
use crate::qea::{Engine, QeError, QeQuery, QueryKind};
use crate::sample::{fnv1a, AssignmentStream, GUARD_SAMPLE_BUDGET, RANDOM_RATIONAL_BOUND};
use crate::thom::{all_candidate_codes, sgnl_comb, sgnr_comb, ParametricRoot, ThomError};
use crate::vsubst::{self, EliminationTerm, VsError};

#[derive(Debug, Error)]
pub enum ElimError {
    #[error("degree {degree} of `{var}` exceeds the requested framework degree {bound}")]
    DegreeExceedsBound { var: String, degree: usize, bound: usize },
    #[error("eliminating `{var}` requires degree {degree}, beyond what the configured backends can answer")]
    DegreeGrowthExceedsCapability { var: String, degree: usize },
    #[error("input is not prenex: a quantifier occurs below a connective")]
    NotPrenex,
    #[error(transparent)]
    Vs(#[from] VsError),
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Thom(#[from] ThomError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Which elimination-set construction to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every candidate code for every atom.
    Full,
    /// Codes filtered by the side of the root the atom's relation needs.
    Lower,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Full => write!(f, "full"),
            Mode::Lower => write!(f, "lower"),
        }
    }
}

/// Verdict of the guard satisfiability probe.
#[derive(Clone, Debug, PartialEq)]
pub enum GuardStatus {
    /// A witness assignment was found (empty for a folded constant).
    Sat(BTreeMap<String, Rational>),
    /// Provably empty; the candidate can be dropped.
    Unsat,
    /// Budget exhausted without a verdict; the candidate is kept.
    Unknown,
}

impl GuardStatus {
    pub fn is_unsat(&self) -> bool {
        matches!(self, GuardStatus::Unsat)
    }
}

/// One candidate with its origin and screening verdict.
#[derive(Clone, Debug)]
pub struct SetEntry {
    pub term: EliminationTerm,
    /// Index of the atom (in document order) that generated the term;
    /// none for −∞.
    pub atom_index: Option<usize>,
    pub status: GuardStatus,
}

/// The ordered candidate set for one ∃x: −∞ exactly once and first,
/// then root candidates in (atom index, code) order with duplicate
/// (polynomial, code, kind) triples removed.
#[derive(Clone, Debug)]
pub struct EliminationSet {
    pub var: String,
    pub degree: usize,
    pub entries: Vec<SetEntry>,
}

impl EliminationSet {
    /// Entries that survived screening.
    pub fn kept(&self) -> impl Iterator<Item = &SetEntry> {
        self.entries.iter().filter(|e| !e.status.is_unsat())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Is this relation satisfied at the root itself (closed) rather than
/// just beside it (open)? Closed relations take the root as candidate,
/// open ones take root + ε.
fn takes_root(rel: Relation) -> bool {
    matches!(rel, Relation::Eq | Relation::Le | Relation::Ge)
}

/// All candidates one atom contributes to the full elimination set:
/// one per candidate code, as roots for =/≤/≥ and as root+ε for ≠/</>.
/// Atoms without the variable contribute nothing.
pub fn terms_full(atom: &Atom, var: &str, n: usize) -> Vec<EliminationTerm> {
    if atom.poly.degree_in(var) == 0 {
        return Vec::new();
    }
    all_candidate_codes(n)
        .into_iter()
        .map(|s| {
            let pr = ParametricRoot::new(atom.poly.clone(), var, s);
            if takes_root(atom.rel) {
                EliminationTerm::Root(pr)
            } else {
                EliminationTerm::RootPlusEps(pr)
            }
        })
        .collect()
}

/// The reduced candidate set: only codes whose root can actually be the
/// lower endpoint of the atom's solution region. Equations keep all
/// root codes and disequations all ε codes; < and > keep ε candidates
/// whose right sign matches; ≤ and ≥ keep root candidates whose left
/// sign matches.
pub fn terms_lower(atom: &Atom, var: &str, n: usize) -> Vec<EliminationTerm> {
    if atom.poly.degree_in(var) == 0 {
        return Vec::new();
    }
    all_candidate_codes(n)
        .into_iter()
        .filter(|s| match atom.rel {
            Relation::Eq | Relation::Ne => true,
            Relation::Lt => sgnr_comb(s).expect("nonzero code") == -1,
            Relation::Gt => sgnr_comb(s).expect("nonzero code") == 1,
            Relation::Le => sgnl_comb(s).expect("nonzero code") == 1,
            Relation::Ge => sgnl_comb(s).expect("nonzero code") == -1,
        })
        .map(|s| {
            let pr = ParametricRoot::new(atom.poly.clone(), var, s);
            if takes_root(atom.rel) {
                EliminationTerm::Root(pr)
            } else {
                EliminationTerm::RootPlusEps(pr)
            }
        })
        .collect()
}

/// Build the candidate set for a positive quantifier-free formula.
/// No screening happens here; every entry starts as Unknown.
pub fn build_set(phi: &Formula, var: &str, n: usize, mode: Mode) -> Result<EliminationSet, ElimError> {
    let ats = formula_atoms(phi)?;
    for a in &ats {
        let d = a.poly.degree_in(var);
        if d > n {
            return Err(ElimError::DegreeExceedsBound {
                var: var.to_string(),
                degree: d,
                bound: n,
            });
        }
    }
    let mut entries = vec![SetEntry {
        term: EliminationTerm::MinusInfinity,
        atom_index: None,
        status: GuardStatus::Sat(BTreeMap::new()),
    }];
    let mut seen: HashSet<(Polynomial, crate::thom::SignSequence, bool)> = HashSet::new();
    for (i, a) in ats.iter().enumerate() {
        let terms = match mode {
            Mode::Full => terms_full(a, var, n),
            Mode::Lower => terms_lower(a, var, n),
        };
        for term in terms {
            let (pr, eps) = match &term {
                EliminationTerm::Root(pr) => (pr, false),
                EliminationTerm::RootPlusEps(pr) => (pr, true),
                EliminationTerm::MinusInfinity => unreachable!(),
            };
            if seen.insert((pr.p.clone(), pr.s.clone(), eps)) {
                entries.push(SetEntry { term, atom_index: Some(i), status: GuardStatus::Unknown });
            }
        }
    }
    Ok(EliminationSet { var: var.to_string(), degree: n, entries })
}

/// Policy for the guard satisfiability probe.
#[derive(Clone, Debug)]
pub struct ScreenPolicy {
    /// Disabled screening keeps every candidate (always sound).
    pub enabled: bool,
    /// Assignments tried per guard.
    pub budget: usize,
    /// Run seed; each guard derives its own stream seed from this and
    /// its own text, so set iteration order cannot matter.
    pub seed: u64,
    /// Magnitude bound for random rational samples.
    pub bound: i64,
}

pub const DEFAULT_SCREEN_SEED: u64 = 0x5eed_0001;

impl Default for ScreenPolicy {
    fn default() -> Self {
        ScreenPolicy {
            enabled: true,
            budget: GUARD_SAMPLE_BUDGET,
            seed: DEFAULT_SCREEN_SEED,
            bound: RANDOM_RATIONAL_BOUND,
        }
    }
}

/// Range of a polynomial over all reals, as an interval with optional
/// infinite ends: (lo, hi) with None meaning unbounded on that side.
fn real_range(p: &Polynomial) -> (Option<Rational>, Option<Rational>) {
    let mut lo = Some(Rational::zero());
    let mut hi = Some(Rational::zero());
    for (m, c) in p.terms() {
        let all_even = m.iter().all(|(_, e)| e % 2 == 0);
        let constant = m.iter().next().is_none();
        let c = Rational::from(c.clone());
        let (tlo, thi): (Option<Rational>, Option<Rational>) = if constant {
            (Some(c.clone()), Some(c))
        } else if all_even {
            // A nonnegative shape scaled by the coefficient.
            if c > Rational::zero() {
                (Some(Rational::zero()), None)
            } else {
                (None, Some(Rational::zero()))
            }
        } else {
            (None, None)
        };
        lo = match (lo, tlo) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        hi = match (hi, thi) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    (lo, hi)
}

/// Can interval reasoning over the whole real line already rule the
/// atom out everywhere?
fn atom_surely_empty(a: &Atom) -> bool {
    let (lo, hi) = real_range(&a.poly);
    let zero = Rational::zero();
    match a.rel {
        Relation::Lt => lo.map_or(false, |l| l >= zero),
        Relation::Le => lo.map_or(false, |l| l > zero),
        Relation::Eq => {
            lo.as_ref().map_or(false, |l| *l > zero) || hi.as_ref().map_or(false, |h| *h < zero)
        }
        Relation::Ne => lo == Some(zero.clone()) && hi == Some(zero),
        Relation::Gt => hi.map_or(false, |h| h <= zero),
        Relation::Ge => hi.map_or(false, |h| h < zero),
    }
}

/// Sound emptiness test: true only if no real assignment can satisfy
/// the (positive, quantifier-free) formula.
fn surely_empty(f: &Formula) -> bool {
    match f {
        Formula::True => false,
        Formula::False => true,
        Formula::Atom(a) => atom_surely_empty(a),
        Formula::And(cs) => cs.iter().any(surely_empty),
        Formula::Or(cs) => cs.iter().all(surely_empty),
        Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => false,
    }
}

/// Probe a quantifier-free guard for satisfiability. Sat verdicts carry
/// a witness found by grid-then-random rational sampling; Unsat is
/// returned only on proof (constant folding or interval emptiness);
/// anything else is Unknown.
pub fn guard_sat(guard: &Formula, policy: &ScreenPolicy) -> GuardStatus {
    let folded = fold_constants(guard);
    match folded {
        Formula::True => return GuardStatus::Sat(BTreeMap::new()),
        Formula::False => return GuardStatus::Unsat,
        _ => {}
    }
    if surely_empty(&folded) {
        return GuardStatus::Unsat;
    }
    let vars: Vec<String> = folded.variables().into_iter().collect();
    let seed = policy.seed ^ fnv1a(&folded.to_string());
    let mut stream = AssignmentStream::new(vars, seed, policy.bound);
    for _ in 0..policy.budget {
        let point = stream.next_assignment();
        if evaluate(&folded, &point).unwrap_or(false) {
            return GuardStatus::Sat(point);
        }
    }
    GuardStatus::Unknown
}

/// Fill in each candidate's screening verdict by resolving its root
/// guard through the engine and probing the result.
pub fn screen_set(
    set: &mut EliminationSet,
    engine: &Engine,
    policy: &ScreenPolicy,
) -> Result<(), ElimError> {
    if !policy.enabled {
        return Ok(());
    }
    for entry in set.entries.iter_mut() {
        let Some(pr) = entry.term.root() else { continue };
        let guard = resolve_guard(pr, engine)?;
        entry.status = guard_sat(&guard, policy);
    }
    Ok(())
}

/// The quantifier-free guard of a parametric root, as answered by the
/// configured backends.
pub fn resolve_guard(pr: &ParametricRoot, engine: &Engine) -> Result<Formula, ElimError> {
    let n = pr.degree();
    let mut p_coeffs = pr.p.coeffs_in(&pr.var, n + 1).map_err(FormulaError::from)?;
    p_coeffs.reverse();
    let query = QeQuery::new(n, QueryKind::Guard { s: pr.s.clone() });
    Ok(engine.resolve(&query, &p_coeffs, None)?)
}

/// Eliminate ∃`var` from a positive quantifier-free formula at the
/// given framework degree, with the default screening policy.
pub fn eliminate_exists(
    phi: &Formula,
    var: &str,
    n: usize,
    mode: Mode,
    engine: &Engine,
) -> Result<Formula, ElimError> {
    eliminate_exists_with(phi, var, n, mode, engine, &ScreenPolicy::default())
}

/// As [`eliminate_exists`], with an explicit screening policy.
pub fn eliminate_exists_with(
    phi: &Formula,
    var: &str,
    n: usize,
    mode: Mode,
    engine: &Engine,
    policy: &ScreenPolicy,
) -> Result<Formula, ElimError> {
    let pf = positive_form(phi)?;
    let mut set = build_set(&pf, var, n, mode)?;
    screen_set(&mut set, engine, policy)?;
    let mut disjuncts = Vec::with_capacity(set.len());
    for entry in set.kept() {
        disjuncts.push(vsubst::substitute(&pf, var, &entry.term, engine)?);
    }
    Ok(Formula::or_of(disjuncts))
}

/// A prenex quantifier prefix, innermost last.
fn split_prenex(f: &Formula) -> Result<(Vec<(bool, String)>, Formula), ElimError> {
    let mut prefix = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Exists(v, g) => {
                prefix.push((false, v.clone()));
                cur = g;
            }
            Formula::Forall(v, g) => {
                prefix.push((true, v.clone()));
                cur = g;
            }
            _ => break,
        }
    }
    if !cur.is_quantifier_free() {
        return Err(ElimError::NotPrenex);
    }
    Ok((prefix, cur.clone()))
}

/// Eliminate a whole prenex quantifier block, innermost quantifier
/// first; ∀x ψ is handled as ¬∃x ¬ψ with the negations flipped into
/// the relations. Each round runs at the variable's actual degree.
/// `n`, when given, caps the degree of every round; rounds beyond the
/// configured backends' reach fail loudly. Quantifier-free input is
/// returned unchanged.
pub fn eliminate_block(
    phi: &Formula,
    n: Option<usize>,
    mode: Mode,
    engine: &Engine,
) -> Result<Formula, ElimError> {
    eliminate_block_with(phi, n, mode, engine, &ScreenPolicy::default())
}

/// As [`eliminate_block`], with an explicit screening policy.
pub fn eliminate_block_with(
    phi: &Formula,
    n: Option<usize>,
    mode: Mode,
    engine: &Engine,
    policy: &ScreenPolicy,
) -> Result<Formula, ElimError> {
    let (prefix, matrix) = split_prenex(phi)?;
    if prefix.is_empty() {
        return Ok(phi.clone());
    }
    let mut cur = matrix;
    for (round, (is_forall, var)) in prefix.iter().rev().enumerate() {
        let body = if *is_forall {
            positive_form(&Formula::Not(Box::new(cur.clone())))?
        } else {
            positive_form(&cur)?
        };
        let d = formula_atoms(&body)?
            .iter()
            .map(|a| a.poly.degree_in(var))
            .max()
            .unwrap_or(0);
        if d == 0 {
            // The variable is absent; the quantifier is vacuous.
            cur = if *is_forall { positive_form(&Formula::Not(Box::new(body)))? } else { body };
            cur = fold_constants(&cur);
            continue;
        }
        if let Some(cap) = n {
            if d > cap {
                return Err(if round == 0 {
                    ElimError::DegreeExceedsBound { var: var.clone(), degree: d, bound: cap }
                } else {
                    ElimError::DegreeGrowthExceedsCapability { var: var.clone(), degree: d }
                });
            }
        }
        let concrete = body.variables().into_iter().all(|v| v == *var);
        if !engine.can_answer(d, concrete) {
            return Err(ElimError::DegreeGrowthExceedsCapability { var: var.clone(), degree: d });
        }
        let eliminated = eliminate_exists_with(&body, var, d, mode, engine, policy)?;
        cur = if *is_forall {
            fold_constants(&positive_form(&Formula::Not(Box::new(eliminated)))?)
        } else {
            eliminated
        };
    }
    Ok(cur)
}
