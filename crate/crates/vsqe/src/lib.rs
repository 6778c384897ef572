//! Real quantifier elimination by virtual substitution, generalized to
//! arbitrary (bounded) degree through Thom-coded parametric roots.
//!
//! The pipeline eliminates one existential quantifier at a time: every atom
//! polynomial contributes a finite set of parametric root descriptions
//! (polynomial + sign sequence of its derivatives), each guarded by a
//! quantifier-free consistency condition, and the matrix is virtually
//! substituted at each root, at each root plus an infinitesimal, and at
//! minus infinity. Quantifier-free equivalents for the root-level queries
//! come from offline tables in generic coefficients, an exact real-root
//! decision procedure for parameter-free instances, or an external solver
//! spoken to over a subprocess bridge.
//!
//! Modules, bottom up:
//!
//! * [`poly`] — sparse multivariate polynomials over big integers.
//! * [`formula`] — Tarski formulas, s-expression grammar, normal forms.
//! * [`realalg`] — Sturm sequences, root isolation, algebraic numbers,
//!   and a one-variable decision procedure used as the ground oracle.
//! * [`thom`] — sign sequences, parametric roots, guards, and the
//!   combinatorial left/right sign rules.
//! * [`qea`] — quantifier-elimination backends: tables, pointfree, bridge.
//! * [`vsubst`] — virtual substitution of elimination terms into atoms.
//! * [`elim`] — elimination sets, the full and reduced term generators,
//!   and the block elimination driver.
//! * [`cli`] — the `vsqe` command implementations.

pub mod cli;
pub mod elim;
pub mod formula;
pub mod poly;
pub mod qea;
pub mod realalg;
pub mod sample;
pub mod thom;
pub mod vsubst;

pub use formula::{Atom, Formula, Relation};
pub use poly::{Polynomial, RatPoly, Rational};
pub use thom::{ParametricRoot, SignSequence};
